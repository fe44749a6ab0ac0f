"""Balanced matching: exact join of the two sources on lemma/word-form/tag windows."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .records import UnifiedRecord


class MatchWindow(NamedTuple):
    lemma: str
    word_form: str
    tag: str


class Reason(str, Enum):
    LEMMA_ABSENT = "LemmaAbsent"
    WINDOW_MISMATCH = "WindowMismatch"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class HomographConflict:
    window: MatchWindow
    candidates: tuple  # (transcription, accent_pos), byte-ordered
    chosen: tuple
    resolved_by_edit: bool = False

    def __post_init__(self):
        if len(self.candidates) < 2 or self.chosen not in self.candidates:
            raise ValueError("a conflict needs two or more candidates including the chosen one")


@dataclass
class MatchReport:
    dmi_lemmas: int = 0
    dmi_forms: int = 0
    parole_lemmas: int = 0
    parole_forms: int = 0
    ul_lemmas: int = 0
    ul_forms: int = 0
    coverage_pct: float = 0.0
    unmatched: list = field(default_factory=list)  # (MatchWindow, Reason)
    conflicts: list = field(default_factory=list)
    post_edit_forms: Optional[int] = None

    def reasons(self) -> Counter:
        return Counter(str(reason) for _, reason in self.unmatched)


class DmiIndex:
    """Immutable map from window to distinct (transcription, accent_pos) candidates."""

    def __init__(self, records):
        windows = {}
        lemmas = set()
        n = 0
        for rec in records:
            n += 1
            lemmas.add(rec.lemma)
            cands = windows.setdefault(MatchWindow(rec.lemma, rec.word_form, rec.tag), [])
            cand = (rec.transcription, rec.accent_pos)
            if cand not in cands:
                cands.append(cand)
        self._windows = {w: tuple(c) for w, c in windows.items()}
        self.lemmas = frozenset(lemmas)
        self.n_records = n

    def __contains__(self, window):
        return window in self._windows

    def __getitem__(self, window):
        return self._windows[window]

    def __len__(self):
        return len(self._windows)

    def __iter__(self):
        return iter(self._windows)

    def get(self, window, default=None):
        return self._windows.get(window, default)


def index_dmi(records) -> DmiIndex:
    return DmiIndex(records)


def _byte_order(candidate):
    transcription, accent = candidate
    return transcription.encode("utf-8"), accent


def classify_unmatched(window, dmi_lemmas, index) -> Reason:
    if window in index:
        raise ValueError(f"{window} matched; only misses can be classified")
    if window.lemma not in dmi_lemmas:
        return Reason.LEMMA_ABSENT
    return Reason.WINDOW_MISMATCH


def balanced_match(parole, index: DmiIndex):
    """Join PAROLE records against the DMI index.

    Returns ``(unified_records, report)``.  When a window has several
    pronunciations the byte-order first is chosen and the window is logged
    as a homograph conflict.
    """
    unified, unmatched, conflicts = [], [], {}
    parole_lemmas = set()
    for rec in parole:
        parole_lemmas.add(rec.lemma)
        window = MatchWindow(rec.lemma, rec.word_form, rec.tag)
        cands = index.get(window)
        if cands is None:
            unmatched.append((window, classify_unmatched(window, index.lemmas, index)))
            continue
        ordered = tuple(sorted(cands, key=_byte_order))
        chosen = ordered[0]
        if len(ordered) > 1 and window not in conflicts:
            conflicts[window] = HomographConflict(window, ordered, chosen)
        unified.append(UnifiedRecord(rec.lemma, rec.word_form, rec.tag, rec.ginp_id, *chosen))

    report = MatchReport(
        dmi_lemmas=len(index.lemmas),
        dmi_forms=index.n_records,
        parole_lemmas=len(parole_lemmas),
        parole_forms=len(parole),
        ul_lemmas=len({r.lemma for r in unified}),
        ul_forms=len(unified),
        coverage_pct=len(unified) / len(parole) if parole else 0.0,
        unmatched=unmatched,
        conflicts=list(conflicts.values()),
    )
    return unified, report


def mark_resolved(conflicts, directives):
    """Flag conflicts whose window is covered by a sense-specific transcription edit."""
    covered = {
        MatchWindow(*d.window)
        for d in directives
        if d.kind == "set-transcription" and d.synu_id
    }
    return [
        HomographConflict(c.window, c.candidates, c.chosen, c.window in covered) for c in conflicts
    ]


# -----------------------------------------------------------------------------
# Rendering


def report_to_dict(report: MatchReport) -> dict:
    out = {
        "dmi": {"lemmas": report.dmi_lemmas, "forms": report.dmi_forms},
        "parole": {"lemmas": report.parole_lemmas, "forms": report.parole_forms},
        "ul": {"lemmas": report.ul_lemmas, "forms": report.ul_forms},
        "coverage_pct": report.coverage_pct,
        "unmatched": [
            {"lemma": w.lemma, "word_form": w.word_form, "tag": w.tag, "reason": str(r)}
            for w, r in report.unmatched
        ],
        "conflicts": [
            {
                "lemma": c.window.lemma,
                "word_form": c.window.word_form,
                "tag": c.window.tag,
                "candidates": [{"transcription": t, "accent_pos": a} for t, a in c.candidates],
                "chosen": {"transcription": c.chosen[0], "accent_pos": c.chosen[1]},
                "resolved_by_edit": c.resolved_by_edit,
            }
            for c in report.conflicts
        ],
    }
    if report.post_edit_forms is not None:
        out["ul"]["post_edit_forms"] = report.post_edit_forms
    return out


def report_from_dict(data: dict) -> MatchReport:
    def window(d):
        return MatchWindow(d["lemma"], d["word_form"], d["tag"])

    return MatchReport(
        dmi_lemmas=data["dmi"]["lemmas"],
        dmi_forms=data["dmi"]["forms"],
        parole_lemmas=data["parole"]["lemmas"],
        parole_forms=data["parole"]["forms"],
        ul_lemmas=data["ul"]["lemmas"],
        ul_forms=data["ul"]["forms"],
        coverage_pct=data["coverage_pct"],
        unmatched=[(window(u), Reason(u["reason"])) for u in data["unmatched"]],
        conflicts=[
            HomographConflict(
                window(c),
                tuple((x["transcription"], x["accent_pos"]) for x in c["candidates"]),
                (c["chosen"]["transcription"], c["chosen"]["accent_pos"]),
                c["resolved_by_edit"],
            )
            for c in data["conflicts"]
        ],
        post_edit_forms=data["ul"].get("post_edit_forms"),
    )


def render_report(report: MatchReport, fmt="text") -> str:
    if fmt == "json":
        return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    rows = [
        ("DMI", report.dmi_lemmas, report.dmi_forms),
        ("PAROLE", report.parole_lemmas, report.parole_forms),
        ("Unified Lexicon", report.ul_lemmas, report.ul_forms),
    ]
    lines = [f"{'':<16}{'lemmas':>10}{'word-forms':>12}"]
    lines += [f"{name:<16}{lem:>10}{forms:>12}" for name, lem, forms in rows]
    if report.post_edit_forms is not None:
        lines.append(f"{'after edits':<16}{'':>10}{report.post_edit_forms:>12}")
    lines.append("")
    lines.append(
        f"coverage: {100 * report.coverage_pct:.1f}% ({report.ul_forms}/{report.parole_forms})"
    )
    hist = report.reasons()
    lines.append(f"unmatched: {len(report.unmatched)}")
    for reason in Reason:
        lines.append(f"  {reason.value:<16}{hist.get(reason.value, 0):>6}")
    resolved = sum(c.resolved_by_edit for c in report.conflicts)
    lines.append(f"homograph conflicts: {len(report.conflicts)} ({resolved} resolved by edits)")
    for c in report.conflicts:
        cands = ", ".join(t for t, _ in c.candidates)
        lines.append(f"  {c.window.lemma}/{c.window.word_form}/{c.window.tag}: {cands} -> {c.chosen[0]}")
    return "\n".join(lines) + "\n"
