"""Independent reference implementations the tests compare the library against.

Nothing here imports the code under test except plain record types.
"""

from __future__ import annotations

import random
from collections import defaultdict

from unilex.records import CanonicalRecord, DmiRecord, UnifiedRecord

# Worked by hand through the rule table (first match wins, digit on the chunk head
# picks the alternative, stress mark before the maximal legal onset).
HAND_WALKED_SAMPA = {
    ("pe1sca", 2): '"peska',
    ("pe2sca", 2): '"pEska',
    ("raz1za", 2): '"rattsa',
    ("raz2za", 2): '"raddza',
    ("pe1sche", 2): '"peske',
    ("città", 5): 'tSi"t:a',
    ("caffè", 5): 'ka"f:E',
    ("figlio", 2): '"fiLLo',
    ("chie2s2a", 4): '"kjEza',
    ("gio1rno", 3): '"dZorno',
    ("cie2lo", 3): '"tSElo',
    ("acqua", 1): '"ak:wa',
    ("uo2mini", 2): '"wOmini',
    ("sce2na", 3): '"SEna',
    ("sciarpa", 4): '"Sarpa',
    ("piz1za", 2): '"pittsa',
    ("be2llo", 2): '"bEl:o',
    ("ro1sso", 2): '"ros:o',
    ("parlare", 5): 'par"lare',
    ("parliamo", 6): 'par"ljamo',
    ("vendiamo", 6): 'ven"djamo',
    ("dormie2nte", 6): 'dor"mjEnte',
    ("z1io", 2): '"tsio',
    ("ragaz1zo", 4): 'ra"gattso',
    ("perché", 6): 'per"ke',
    ("farmacia", 7): 'farma"tSia',
}


# -----------------------------------------------------------------------------
# Canonical transcription generator

_PLAIN = list("pbtdfvlmnr")
_CLUSTERS = ["pr", "tr", "br", "dr", "gr", "fr", "pl", "bl", "fl", "cr", "st", "sp"]
_BACK_ONLY = {"c": "c", "g": "g", "ci": "ci", "gi": "gi", "sci": "sci"}
_FRONT_ONLY = {"ch": "ch", "gh": "gh", "sc": "sc"}
_CODAS = ["l", "n", "r"]
_CODA_NEXT = list("ptdmb")
_FINAL_ACCENTED = {"a": ["à"], "e": ["é", "è"], "i": ["ì"], "o": ["ó", "ò"], "u": ["ù"]}


def _onset(rng, vowel, first):
    """Return (annotated onset, letters) fitting before ``vowel``."""
    front = vowel in "ei"
    pool = [(c, c) for c in _PLAIN + _CLUSTERS + ["gn"]]
    pool += [("s", "s"), ("s2", "s"), ("z1", "z"), ("z2", "z")]
    if front:
        pool += [(v, v) for v in _FRONT_ONLY]
    else:
        pool += [(v, v) for v in _BACK_ONLY]
    if vowel != "u":
        pool.append(("qu", "qu"))
    if first:
        pool.append(("", ""))
    return rng.choice(pool)


def _geminate(rng, onset, vowel):
    """A doubled version of a simple onset, or None."""
    if onset in _PLAIN:
        return onset * 2
    if onset == "s":
        return "ss"
    if onset in ("z1", "z2"):
        return onset + "z"
    if onset == "c" and vowel not in "ei":
        return "cc"
    return None


def random_canonical(rng: random.Random):
    """One canonical (annotated, accent_pos) pair built syllable by syllable."""
    n = rng.choice([1, 2, 2, 3, 3, 3, 4])
    stressed = rng.randrange(n) if n < 3 else rng.choice([n - 2, n - 2, n - 1, n - 3])
    parts, letters, accent = [], 0, 0
    prev_coda = False
    for i in range(n):
        vowel = rng.choice("aeiouaeoa")
        onset, plain = _onset(rng, vowel, first=(i == 0))
        if i > 0 and not prev_coda and rng.random() < 0.2:
            gem = _geminate(rng, onset, vowel)
            if gem is not None:
                onset = gem
        if prev_coda:
            onset = rng.choice(_CODA_NEXT)
        letters += sum(ch.isalpha() for ch in onset)
        if i == stressed:
            if i == n - 1 and n > 1 and rng.random() < 0.5:
                nucleus = rng.choice(_FINAL_ACCENTED[vowel])
            elif vowel in "eo":
                nucleus = vowel + rng.choice("12")
            else:
                nucleus = vowel
            accent = letters + 1
        elif vowel in "eo" and rng.random() < 0.15:
            nucleus = vowel + "2"
        else:
            nucleus = vowel
        letters += 1
        parts.append(onset + nucleus)
        prev_coda = False
        if i < n - 1 and rng.random() < 0.2:
            parts.append(rng.choice(_CODAS))
            letters += 1
            prev_coda = True
    return "".join(parts), accent


def canonical_corpus(size: int, seed: int = 0):
    """``size`` distinct canonical transcriptions, deterministic for a seed."""
    rng = random.Random(seed)
    seen = {}
    while len(seen) < size:
        ann, acc = random_canonical(rng)
        seen.setdefault((ann, acc), None)
    return list(seen)


# -----------------------------------------------------------------------------
# Matching


def brute_force_join(parole, dmi):
    """Nested-loop join on (lemma, word_form, tag), byte-order tie-break.

    Returns ``(unified set, [(window, reason)])`` with reasons as strings.
    """
    dmi_rows = [((d.lemma, d.word_form, d.tag), d.lemma, (d.transcription, d.accent_pos)) for d in dmi]
    unified, misses = set(), []
    for p in parole:
        key = (p.lemma, p.word_form, p.tag)
        cands = [c for k, _, c in dmi_rows if k == key]
        if not cands:
            lemma_known = any(lem == p.lemma for _, lem, _ in dmi_rows)
            misses.append((key, "WindowMismatch" if lemma_known else "LemmaAbsent"))
            continue
        best = min(cands, key=lambda c: (c[0].encode("utf-8"), c[1]))
        unified.add(UnifiedRecord(p.lemma, p.word_form, p.tag, p.ginp_id, *best))
    return unified, misses


def random_match_corpus(rng, n_parole, n_dmi):
    """Small-alphabet corpora so windows collide, miss and conflict often."""
    lemmas = [f"l{i}" for i in range(max(2, n_parole // 6))]
    tags = ["N-FS", "N-FP", "V-INF"]
    parole = []
    for _ in range(n_parole):
        lem = rng.choice(lemmas)
        parole.append(CanonicalRecord(lem, lem + rng.choice("aei"), rng.choice(tags), "1"))
    dmi = []
    for _ in range(n_dmi):
        lem = rng.choice(lemmas + ["x1", "x2"])
        form = lem + rng.choice("aeiou")
        gramcat, feats = rng.choice(tags).split("-")
        dmi.append(DmiRecord(lem, form, form, rng.randint(0, 2), gramcat, feats))
    return parole, dmi


# -----------------------------------------------------------------------------
# Database


def reachability(corr_phu_mu, corr_mu_synu, corr_synu_semu):
    """SemU id -> PhU ids reachable through SynU and MU, from raw link rows."""
    synus_of = defaultdict(set)
    for row in corr_synu_semu:
        synus_of[row.semu_id].add(row.synu_id)
    mus_of = defaultdict(set)
    for row in corr_mu_synu:
        mus_of[row.synu_id].add(row.mu_id)
    phus_of = defaultdict(set)
    for row in corr_phu_mu:
        phus_of[row.mu_id].add(row.phu_id)
    return {
        semu: {p for s in synus for m in mus_of[s] for p in phus_of[m]}
        for semu, synus in synus_of.items()
    }


def distinct_counts(ul):
    """Table sizes a build of ``ul`` must produce (no PhUVs assumed)."""
    return {
        "phu": len({(r.word_form, r.transcription, r.accent_pos) for r in ul}),
        "mu": len({(r.lemma, r.tag.split("-")[0], r.ginp_id) for r in ul}),
        "corr_phu_mu": len(ul),
    }


def oracle_report(parole, dmi) -> dict:
    """The JSON match report, computed from the nested-loop join alone."""
    unified, misses = brute_force_join(parole, dmi)
    matched = [p for p in parole if (p.lemma, p.word_form, p.tag) not in {k for k, _ in misses}]
    conflicts, seen = [], set()
    for p in parole:
        key = (p.lemma, p.word_form, p.tag)
        cands = []
        for d in dmi:
            c = (d.transcription, d.accent_pos)
            if (d.lemma, d.word_form, d.tag) == key and c not in cands:
                cands.append(c)
        if len(cands) > 1 and key not in seen:
            seen.add(key)
            cands.sort(key=lambda c: (c[0].encode("utf-8"), c[1]))
            conflicts.append({
                "lemma": key[0], "word_form": key[1], "tag": key[2],
                "candidates": [{"transcription": t, "accent_pos": a} for t, a in cands],
                "chosen": {"transcription": cands[0][0], "accent_pos": cands[0][1]},
                "resolved_by_edit": False,
            })
    return {
        "dmi": {"lemmas": len({d.lemma for d in dmi}), "forms": len(dmi)},
        "parole": {"lemmas": len({p.lemma for p in parole}), "forms": len(parole)},
        "ul": {"lemmas": len({p.lemma for p in matched}), "forms": len(matched)},
        "coverage_pct": len(matched) / len(parole) if parole else 0.0,
        "unmatched": [{"lemma": k[0], "word_form": k[1], "tag": k[2], "reason": r} for k, r in misses],
        "conflicts": conflicts,
    }
