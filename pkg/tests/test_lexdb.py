import dataclasses
import json

import pytest
from lxml import etree

from oracles import distinct_counts, reachability
from unilex.errors import FormatError, IntegrityError
from unilex.inflection import expand_lexicon
from unilex.lexdb import (
    CorrMuSynu,
    CorrSynuSemu,
    LexDb,
    build_db,
    duplicate_homograph_mus,
    export_xml,
    import_xml,
    integrity_check,
    load_db,
    lookup,
    save_db,
    stats,
    validate,
)
from unilex.records import EditDirective, LayerFixtures, MorphUnitDecl, UnifiedRecord


@pytest.fixture(scope="module")
def built(pipeline_result, parole_lexicon, layers):
    """The fixture database before homograph duplication."""
    mus, ginps = parole_lexicon
    return build_db(pipeline_result.ul, ginps, layers, mus)


@pytest.fixture(scope="module")
def final(pipeline_result):
    return pipeline_result.db


def test_cardinalities_match_distinct_count_oracle(built, pipeline_result):
    expected = distinct_counts(pipeline_result.ul)
    got = stats(built)
    assert {k: got[k] for k in expected} == expected
    assert got["phuv"] == 0


def test_fresh_and_split_databases_are_sound(built, final):
    assert integrity_check(built) == []
    assert integrity_check(final) == []


def test_build_without_layers(pipeline_result, parole_lexicon):
    db = build_db(pipeline_result.ul, parole_lexicon[1])
    assert not db.synus and not db.semus and not db.corr_mu_synu
    assert integrity_check(db) == []


def test_build_uses_declared_mu_ids(built):
    assert "MUSpescaNOUN2" in built.mus
    phu = built.phus["PHUpesca"]
    assert (phu.dmi, phu.accent_pos, phu.sampa) == ("pe1sca", 2, '"peska')
    assert built.synus_of_mu("MUSpescaNOUN2") == ["SYNUpescaN1", "SYNUpescaN2", "SYNUpescaN3"]


def test_variant_transcriptions_become_phuvs():
    ginps = {}
    from unilex.inflection import Ginp, InflectionRule

    ginps["1"] = Ginp("1", "N", [InflectionRule("", "", "N-MS"), InflectionRule("", "", "N-MP")])
    ul = [UnifiedRecord("sci", "sci", "N-MS", "1", "sci", 3), UnifiedRecord("sci", "sci", "N-MP", "1", "sci", 0)]
    db = build_db(ul, ginps)
    assert list(db.phus) == ["PHUsci"]
    assert [(v.phu_id, v.dmi, v.accent_pos) for v in db.phuvs.values()] == [("PHUsci", "sci", 0)]
    assert len(db.corr_phu_mu) == 2
    assert integrity_check(db) == []


def test_unresolvable_synu_aborts(pipeline_result, parole_lexicon, layers):
    from unilex.records import MuRef

    bad = layers._replace(synu_mu=layers.synu_mu[:-1] + [MuRef("SYNUbelloA1", "bello", "N")])
    with pytest.raises(IntegrityError, match="SYNUbelloA1"):
        build_db(pipeline_result.ul, parole_lexicon[1], bad, parole_lexicon[0])


def test_corrupted_link_gives_exactly_one_violation(final):
    db = final.copy()
    db.corr_mu_synu = db.corr_mu_synu + [CorrMuSynu("MUSnopeNOUN1", "SYNUpescaN9")]
    problems = integrity_check(db)
    assert len(problems) == 1 and "MUSnopeNOUN1->SYNUpescaN9" in problems[0]
    db = final.copy()
    db.corr_synu_semu = db.corr_synu_semu + [CorrSynuSemu("SYNUpescaN2", "USemnope")]
    problems = integrity_check(db)
    assert len(problems) == 1 and "USemnope" in problems[0]
    db = final.copy()
    phu = db.phus["PHUpesca"]
    db.phus["PHUpesca"] = dataclasses.replace(phu, sampa='"pEska')
    problems = integrity_check(db)
    assert len(problems) == 1 and "PHUpesca" in problems[0]


def test_split_shares_ginp_and_conserves_paradigms(built, final, pipeline_result):
    new = final.mus["MUSpescaNOUN3"]
    assert new.ginp_id == final.mus["MUSpescaNOUN2"].ginp_id == "110"
    assert new.homograph_of == "MUSpescaNOUN2"

    def forms(db, mu_id):
        return {(db.phus[c.phu_id].naming, c.morph_feat) for c in db.corr_phu_mu if c.mu_id == mu_id}

    assert forms(final, "MUSpescaNOUN2") == forms(final, "MUSpescaNOUN3") == forms(built, "MUSpescaNOUN2")
    # SynU partition sums to the original count
    assert len(final.synus_of_mu("MUSpescaNOUN2")) + len(final.synus_of_mu("MUSpescaNOUN3")) == 3
    # every (word_form, tag) derivable from morphology is unchanged
    mus = [MorphUnitDecl(m.mu_id, m.naming, m.gramcat, m.ginp_id) for m in final.mus.values()]
    derived = {(r.word_form, r.tag) for r in expand_lexicon(mus, final.ginps)}
    before = [MorphUnitDecl(m.mu_id, m.naming, m.gramcat, m.ginp_id) for m in built.mus.values()]
    assert derived == {(r.word_form, r.tag) for r in expand_lexicon(before, built.ginps)}
    # corr rows equal the surviving unified records
    assert len(set(final.corr_phu_mu)) == len(pipeline_result.ul)


def test_duplication_without_conflicts_is_identity(built):
    db, splits, unresolved = duplicate_homograph_mus(built, [])
    assert db == built and splits == [] and unresolved == []


def test_duplication_is_idempotent(final, edits):
    again, splits, _ = duplicate_homograph_mus(final, edits)
    assert again == final and splits == []


def test_duplication_unknown_synu(built):
    d = EditDirective("set-transcription", "pesca", "pesca", "N-FS", "SYNUnope", "pe2sca", 2)
    with pytest.raises(IntegrityError, match="SYNUnope"):
        duplicate_homograph_mus(built, [d])


def test_uncovered_conflict_is_reported(built, pipeline_result, edits):
    pesca_only = [d for d in edits if d.lemma == "pesca"]
    db, splits, unresolved = duplicate_homograph_mus(built, pesca_only, pipeline_result.report.conflicts)
    assert [s.original for s in splits] == ["MUSpescaNOUN2"]
    assert sorted(c.window.word_form for c in unresolved) == ["razza", "razze"]
    assert integrity_check(db) == []


def test_lookup_paths_follow_reachability_oracle(final):
    graph = lookup(final, "pesca")
    oracle = reachability(final.corr_phu_mu, final.corr_mu_synu, final.corr_synu_semu)
    paths = graph.pronunciation_paths()
    assert set(paths) == {"USem60480pesca", "USem60481pesca", "USem60483pesca"}
    for semu, phus in paths.items():
        assert phus == oracle[semu] == final.reachable_phus(semu)
    assert paths["USem60481pesca"].isdisjoint(paths["USem60480pesca"])


def test_lookup_word_form_and_unknown(final):
    g = lookup(final, "pesche")
    # both readings of the plural, each reaching its own MU
    assert {p.phu_id for p in g.phus} == {"PHUpesche", "PHUpesche2"}
    assert {m.mu_id for m in g.mus} == {"MUSpescaNOUN2", "MUSpescaNOUN3"}
    assert [c.mu_id for c in g.corr_phu_mu if c.phu_id == "PHUpesche"] == ["MUSpescaNOUN2"]
    assert [p.naming for p in lookup(final, "pesca").phus].count("pesche") == 2
    assert not lookup(final, "xyzzy")
    assert lookup(final, "pesca").mus == tuple(sorted(lookup(final, "pesca").mus))


def test_export_import_round_trip(final):
    doc = export_xml(final)
    assert validate(doc) == []
    assert import_xml(doc) == final


def test_partial_export_merges_into_empty_db(final):
    part = import_xml(export_xml(final, "PHUpesca"))
    merged = LexDb().merge(part)
    assert merged == part
    assert set(part.phus) == {"PHUpesca"}
    assert set(part.synus) == {"SYNUpescaN2", "SYNUpescaN3"}
    # the fragment is the sub-graph of the full database
    for name, rows in part.tables().items():
        full = final.tables()[name]
        if isinstance(rows, dict):
            assert all(full[k] == v for k, v in rows.items())
        else:
            assert set(rows) <= set(full)


def test_export_empty_and_unmatched_selector(final):
    for doc in (export_xml(LexDb()), export_xml(final, "nothing-here")):
        root = etree.fromstring(doc)
        assert [c.tag for c in root] == ["ClipsPhono", "ParoleMorpho", "ParoleSyntaxe", "ParoleSemant"]
        assert all(len(c) == 0 for c in root)
        assert validate(doc) == []


def test_import_rejects_invalid_document(final):
    doc = export_xml(final, "PHUpesca").replace(b"<ClipsPhono>", b"<ClipsPhono><Bogus/>")
    with pytest.raises(FormatError):
        import_xml(doc)
    with pytest.raises(FormatError):
        import_xml(b"<Parole")


def test_stats_projection_and_empty(final):
    s = stats(final)
    flat = s["flat_projection"]["corr_semu_phu"]
    assert flat > s["corr_phu_mu"]
    assert s["flat_projection"]["increase_pct"] == round(100 * (flat - s["corr_phu_mu"]) / s["corr_phu_mu"], 2)
    empty = stats(LexDb())
    assert all(v == 0 for k, v in empty.items() if k != "flat_projection")
    assert empty["flat_projection"] == {"corr_semu_phu": 0, "increase_pct": 0.0}


def test_merge_conflict():
    a, b = LexDb(), LexDb()
    from unilex.records import SynU

    a.synus["S"] = SynU("S", "x")
    b.synus["S"] = SynU("S", "y")
    with pytest.raises(IntegrityError):
        a.merge(b)


def test_store_round_trip_and_checksum(final, tmp_path):
    save_db(final, tmp_path / "db")
    assert load_db(tmp_path / "db") == final
    manifest = json.loads((tmp_path / "db" / "manifest.json").read_text())
    assert manifest["tables"]["phu.tsv"]["rows"] == len(final.phus)
    (tmp_path / "db" / "mu.tsv").write_text("tampered\n")
    with pytest.raises(IntegrityError):
        load_db(tmp_path / "db")
    with pytest.raises(FormatError):
        load_db(tmp_path)


def test_empty_layers_fixture_build(pipeline_result, parole_lexicon):
    db = build_db(pipeline_result.ul, parole_lexicon[1], LayerFixtures([], [], [], []))
    assert stats(db)["synu"] == 0
