import random

import pytest

from oracles import brute_force_join, random_match_corpus
from unilex.matching import (
    HomographConflict,
    MatchWindow,
    Reason,
    balanced_match,
    classify_unmatched,
    index_dmi,
    mark_resolved,
    render_report,
    report_from_dict,
    report_to_dict,
)
from unilex.records import CanonicalRecord, DmiRecord, EditDirective


@pytest.mark.parametrize("seed, n", [(1, 10), (2, 100), (3, 1000), (4, 3000)])
def test_balanced_match_equals_nested_loop_join(seed, n):
    rng = random.Random(seed)
    parole, dmi = random_match_corpus(rng, n, n)
    unified, report = balanced_match(parole, index_dmi(dmi))
    expected, misses = brute_force_join(parole, dmi)
    assert set(unified) == expected
    assert report.ul_forms + len(report.unmatched) == report.parole_forms == len(parole)
    assert [(tuple(w), str(r)) for w, r in report.unmatched] == misses


def test_single_conflict_per_window_and_byte_order_choice():
    dmi = [DmiRecord("razza", "razza", t, 2, "N", "FS") for t in ("raz2za", "raz1za", "raz2za")]
    parole = [CanonicalRecord("razza", "razza", "N-FS", "111")] * 2
    unified, report = balanced_match(parole, index_dmi(dmi))
    assert [u.transcription for u in unified] == ["raz1za", "raz1za"]
    assert len(report.conflicts) == 1
    c = report.conflicts[0]
    assert c.candidates == (("raz1za", 2), ("raz2za", 2)) and c.chosen == ("raz1za", 2)


def test_classify():
    idx = index_dmi([DmiRecord("tavolo", "tavolo", "tavolo", 2, "N", "MS")])
    assert classify_unmatched(MatchWindow("gnocco", "gnocco", "N-MS"), idx.lemmas, idx) == Reason.LEMMA_ABSENT
    assert classify_unmatched(MatchWindow("tavolo", "tavoli", "N-MP"), idx.lemmas, idx) == Reason.WINDOW_MISMATCH
    with pytest.raises(ValueError):
        classify_unmatched(MatchWindow("tavolo", "tavolo", "N-MS"), idx.lemmas, idx)


def test_empty_inputs():
    unified, report = balanced_match([], index_dmi([]))
    assert unified == [] and report.coverage_pct == 0.0


def test_conflict_needs_two_candidates():
    with pytest.raises(ValueError):
        HomographConflict(MatchWindow("a", "a", "N-FS"), (("a", 1),), ("a", 1))


def test_mark_resolved():
    w = MatchWindow("pesca", "pesca", "N-FS")
    c = HomographConflict(w, (("pe1sca", 2), ("pe2sca", 2)), ("pe1sca", 2))
    scoped = EditDirective("set-transcription", *w, "SYNUpescaN1", "pe2sca", 2)
    unscoped = EditDirective("set-transcription", *w, None, "pe2sca", 2)
    assert mark_resolved([c], [scoped])[0].resolved_by_edit
    assert not mark_resolved([c], [unscoped])[0].resolved_by_edit


def test_report_json_round_trip_and_text(pipeline_result):
    report = pipeline_result.report
    assert report_from_dict(report_to_dict(report)) == report
    text = render_report(report)
    assert "coverage: 97.0% (97/100)" in text
    assert "LemmaAbsent" in text and "4 resolved by edits" in text
    with pytest.raises(ValueError):
        render_report(report, "yaml")
