import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unilex import formats
from unilex.errors import FieldOverflowError, FormatError, UnmappedTagError
from unilex.records import CanonicalRecord, DmiRecord, EditDirective, UnifiedRecord


def dmi_line(lemma, form, trans, accent, gramcat, feats):
    return formats.write_dmi([DmiRecord(lemma, form, trans, accent, gramcat, feats)])


def test_parse_dmi_single_line():
    recs = formats.parse_dmi(dmi_line("pesca", "pesca", "pe1sca", 2, "N", "FS"))
    assert recs == [DmiRecord("pesca", "pesca", "pe1sca", 2, "N", "FS")]
    assert recs[0].tag == "N-FS"


def test_parse_dmi_empty():
    assert formats.parse_dmi(b"") == []


def test_dmi_layout_width():
    line = dmi_line("pesca", "pesca", "pe1sca", 2, "N", "FS").decode().rstrip("\n")
    assert len(line) == 90
    assert line[80:82] == " 2"


def test_digit_strip_mismatch_reports_line():
    good = dmi_line("pesca", "pesca", "pe1sca", 2, "N", "FS").decode()
    bad = good.replace("pe1sca ", "pe1scha")
    with pytest.raises(FormatError) as exc:
        formats.parse_dmi((good + bad).encode())
    assert [ln for ln, _ in exc.value.errors] == [2]
    assert "line 2" in str(exc.value)


def test_accent_out_of_range_and_lenient_mode():
    good = dmi_line("casa", "casa", "casa", 2, "N", "FS").decode()
    bad = good.replace(" 2N", " 9N")
    errors = []
    recs = formats.parse_dmi((bad + good).encode(), strict=False, errors=errors)
    assert len(recs) == 1 and errors[0][0] == 1
    with pytest.raises(FormatError):
        formats.parse_dmi((bad + good).encode())


def test_width_violation():
    line = dmi_line("casa", "casa", "casa", 2, "N", "FS").decode().rstrip("\n") + "XX\n"
    with pytest.raises(FormatError):
        formats.parse_dmi(line.encode())


def test_overflow_is_never_truncated():
    with pytest.raises(FieldOverflowError):
        formats.write_canonical([CanonicalRecord("a" * 25, "a", "N-FS", "1")])
    with pytest.raises(FieldOverflowError):
        formats.write_canonical([CanonicalRecord("a b", "a", "N-FS", "1")])


def test_columns_count_characters_not_bytes():
    rec = CanonicalRecord("città", "città", "N-FS", "130")
    data = formats.write_canonical([rec])
    assert len(data.decode().rstrip("\n")) == 68
    assert formats.parse_canonical(data) == [rec]


def test_unified_sense_column_optional():
    plain = UnifiedRecord("pesca", "pesca", "N-FS", "110", "pe1sca", 2)
    scoped = UnifiedRecord("pesca", "pesca", "N-FS", "110", "pe2sca", 2, "SYNUpescaN1")
    data = formats.write_unified([plain, scoped])
    lines = data.decode().splitlines()
    assert len(lines[0]) == 102 and len(lines[1]) == 126
    assert lines[1][102:] == "SYNUpescaN1".ljust(24)
    assert formats.parse_unified(data) == [plain, scoped]


_word = st.text(alphabet="abcdefghilmnopqrstuvzàèéìòù", min_size=1, max_size=12)


@st.composite
def canonical_records(draw):
    return CanonicalRecord(draw(_word), draw(_word), draw(st.sampled_from(["N-FS", "V-IND1S", "B"])),
                           str(draw(st.integers(1, 9999))))


@st.composite
def dmi_records(draw):
    form = draw(st.text(alphabet="abcdilmnoprst", min_size=1, max_size=12))
    accent = draw(st.integers(0, len(form)))
    return DmiRecord(draw(_word), form, form, accent, draw(st.sampled_from(["N", "V", "A"])),
                     draw(st.sampled_from(["", "FS", "IP1S"])))


@st.composite
def unified_records(draw):
    c = draw(canonical_records())
    return UnifiedRecord(c.lemma, c.word_form, c.tag, c.ginp_id, c.word_form.lower(),
                         draw(st.integers(0, 12)), draw(st.sampled_from(["", "SYNUx1"])))


@settings(max_examples=200)
@given(st.lists(canonical_records(), max_size=20))
def test_canonical_round_trip(recs):
    data = formats.write_canonical(recs)
    assert formats.parse_canonical(data) == recs
    assert formats.write_canonical(formats.parse_canonical(data)) == data


@settings(max_examples=200)
@given(st.lists(unified_records(), max_size=20))
def test_unified_round_trip(recs):
    data = formats.write_unified(recs)
    assert formats.parse_unified(data) == recs
    assert formats.write_unified(formats.parse_unified(data)) == data


@settings(max_examples=200)
@given(st.lists(dmi_records(), max_size=20))
def test_dmi_round_trip(recs):
    data = formats.write_dmi(recs)
    assert formats.parse_dmi(data) == recs
    assert formats.write_dmi(formats.parse_dmi(data)) == data


PAROLE = b"""<MorphLexicon>
  <Mu id="MUSpescaNOUN2" lemma="pesca" gramcat="N" ginp="110"/>
  <Mu id="MUSbarcaNOUN1" lemma="barca" gramcat="N" ginp="110"/>
  <Ginp id="110" gramcat="N"><Rule remove="a" add="a" tag="N-FS"/><Rule remove="a" add="he" tag="N-FP"/></Ginp>
</MorphLexicon>"""


def test_parse_parole_shared_ginp():
    mus, ginps = formats.parse_parole_lexicon(PAROLE)
    assert [m.mu_id for m in mus] == ["MUSpescaNOUN2", "MUSbarcaNOUN1"]
    assert list(ginps) == ["110"] and ginps["110"].tags == ["N-FS", "N-FP"]
    again = formats.parse_parole_lexicon(formats.write_parole_lexicon(mus, ginps))
    assert again == (mus, ginps)


@pytest.mark.parametrize(
    "doc, needle",
    [
        (PAROLE.replace(b'ginp="110"/>\n  <Mu id="MUSbarca', b'ginp="999"/>\n  <Mu id="MUSbarca'), "unresolved"),
        (PAROLE.replace(b"MUSbarcaNOUN1", b"MUSpescaNOUN2"), "duplicate MU"),
        (PAROLE.replace(b'add="he" ', b""), "add"),
    ],
)
def test_parse_parole_errors(doc, needle):
    with pytest.raises(FormatError) as exc:
        formats.parse_parole_lexicon(doc)
    assert needle in str(exc.value)


def test_layer_fixtures_round_trip(fixture_dir):
    layers = formats.parse_layer_fixtures((fixture_dir / "layers.xml").read_bytes())
    assert formats.parse_layer_fixtures(formats.write_layer_fixtures(layers)) == layers
    assert len(layers.synus) == 9 and len(layers.semus) == 10


def test_layer_fixtures_dangling_semu():
    doc = b"""<LayerFixtures><ParoleSyntaxe>
      <SynU id="S1" naming="x" lemma="x" gramcat="N"><CorrespSynUsemU targetsemu="nope"/></SynU>
    </ParoleSyntaxe><ParoleSemant/></LayerFixtures>"""
    with pytest.raises(FormatError, match="undeclared SemU"):
        formats.parse_layer_fixtures(doc)


def test_edits_round_trip_and_errors(fixture_dir):
    directives = formats.parse_edits((fixture_dir / "edits.tsv").read_bytes())
    assert len(directives) == 4 and directives[0].synu_id == "SYNUpescaN1"
    assert formats.parse_edits(formats.write_edits(directives)) == directives
    more = [EditDirective("remap-tag", "a", "b", "N-FS", new_tag="N-MS"),
            EditDirective("suppress-form", "a", "b", "N-FS", synu_id="S1")]
    assert formats.parse_edits(formats.write_edits(more)) == more
    with pytest.raises(FormatError) as exc:
        formats.parse_edits(b"bogus a b c -\nset-transcription pesca pesca N-FS - pe1scha 2\n")
    assert [ln for ln, _ in exc.value.errors] == [1, 2]


def test_tag_mapping(fixture_dir):
    mapping = formats.parse_tag_mapping((fixture_dir / "tag_mapping.tsv").read_bytes())
    assert mapping.map("V", "IP1S") == "V-IND1S"
    assert mapping.map("V", "IND1S") == "V-IND1S"  # already canonical
    assert mapping.map("B", "") == "B"
    with pytest.raises(UnmappedTagError):
        mapping.map("X", "YY")
    assert formats.parse_tag_mapping(formats.write_tag_mapping(mapping)) == mapping


def test_tag_mapping_must_be_injective():
    with pytest.raises(ValueError):
        formats.TagMapping({("V", "IP1S"): "V-IND1S", ("V", "P1S"): "V-IND1S"})
    with pytest.raises(FormatError):
        formats.parse_tag_mapping(b"V\tIP1S\tV-IND1S\nV\tIP1S\tV-IND2S\n")
