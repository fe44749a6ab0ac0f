"""Annotated-orthography transcriptions and their conversion to and from SAMPA.

A DMI transcription is the word's orthography with quality digits inserted:
``1``/``2`` after ``e`` and ``o`` mark closed/open vowels, after ``s`` and
``z`` unvoiced/voiced consonants.  In a geminate pair the digit follows the
first letter (``raz1za``).  The accent position is a separate 1-based letter
index, counting letters only.

Conversion to SAMPA walks a first-match-wins grapheme rule table, then places
the stress mark before the onset of the stressed syllable.  Onsets are
maximal, but s + consonant is never an onset, which gives ``"peska`` for
``pe1sca``.

The canonical annotation, which :func:`sampa_to_dmi` produces and on which
the round trip is exact, writes a digit on a stressed ``e``/``o``, on an
open unstressed ``e``/``o``, on a voiced ``s`` and on every ``z``, and
nowhere else.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .errors import AlignmentError, ConversionError, TranscriptionError

logger = logging.getLogger(__name__)

VOWEL_LETTERS = frozenset("aeiouàèéìíòóùú")
LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz") | VOWEL_LETTERS
QUALITY_LETTERS = frozenset("eosz")
DIGITS = frozenset("12")

VOWEL_PHONES = frozenset(["a", "e", "E", "i", "o", "O", "u"])
CONSONANT_PHONES = frozenset(
    ["p", "b", "t", "d", "k", "g", "ts", "dz", "tS", "dZ", "f", "v", "s", "z",
     "S", "m", "n", "J", "l", "L", "r", "j", "w"]
)
PHONES = VOWEL_PHONES | CONSONANT_PHONES
STRESS = '"'
LENGTH = ":"

_STOPS = frozenset("pbtdkg")
_LIQUIDS = frozenset("lr")
_GLIDES = frozenset("jw")

_MACROS = {"{V}": "[aeiouàèéìíòóùú]", "{F}": "[eièéìí]"}


def strip_digits(annotated: str) -> str:
    return "".join(ch for ch in annotated if not ch.isdigit())


def count_letters(text: str) -> int:
    """Number of letters in ``text``; digits and apostrophes are not letters."""
    return sum(1 for ch in text if ch.isalpha())


# -----------------------------------------------------------------------------
# Transcriptions


@dataclass(frozen=True)
class DmiTranscription:
    annotated: str
    accent_pos: int = 0

    @property
    def bare(self) -> str:
        return strip_digits(self.annotated)

    def __str__(self):
        return f"{self.annotated}/{self.accent_pos}"


@dataclass(frozen=True)
class SampaTranscription:
    phones: tuple

    def __str__(self):
        return "".join(self.phones)

    @classmethod
    def parse(cls, text: str) -> "SampaTranscription":
        """Tokenize a SAMPA string, longest phone first.

        A plain ``t`` followed by ``s`` cannot be told apart from the
        affricate ``ts`` in string form; such input always reads as the
        affricate.
        """
        tokens = []
        i = 0
        while i < len(text):
            two = text[i:i + 2]
            if two in PHONES and len(two) == 2:
                tokens.append(two)
                i += 2
            elif text[i] in PHONES or text[i] in (STRESS, LENGTH):
                tokens.append(text[i])
                i += 1
            elif text[i] == "ˈ":
                tokens.append(STRESS)
                i += 1
            else:
                raise AlignmentError(f"{text[i]!r} is not an Italian SAMPA symbol", i)
        return cls(tuple(tokens))

    def check(self):
        if self.phones.count(STRESS) != 1:
            raise ConversionError(f"expected exactly one stress mark in {self}")
        for i, tok in enumerate(self.phones):
            if tok not in PHONES and tok not in (STRESS, LENGTH):
                raise ConversionError(f"{tok!r} is not in the phone inventory")
            if tok == LENGTH and (i == 0 or self.phones[i - 1] not in CONSONANT_PHONES):
                raise ConversionError("length mark must follow a consonant")
        return self


def _split_annotated(annotated: str):
    """Return parallel lists of letters and their digits (None when absent)."""
    letters, digits = [], []
    for pos, ch in enumerate(annotated):
        if ch.isdigit():
            if ch not in DIGITS:
                raise TranscriptionError(f"quality digit must be 1 or 2, got {ch!r}", len(letters))
            if not letters:
                raise TranscriptionError("transcription starts with a digit", 0)
            if digits[-1] is not None:
                raise TranscriptionError("two digits in a row", len(letters))
            digits[-1] = int(ch)
        else:
            letters.append(ch)
            digits.append(None)
    return letters, digits


def validate_dmi(annotated: str, accent_pos: int) -> DmiTranscription:
    """Check every digit-convention invariant; return the transcription on success."""
    if not annotated:
        raise TranscriptionError("empty transcription")
    letters, digits = _split_annotated(annotated)
    for i, ch in enumerate(letters):
        if ch not in LETTERS:
            raise TranscriptionError(f"unsupported character {ch!r}", i + 1)
        if digits[i] is None:
            continue
        if ch not in QUALITY_LETTERS:
            raise TranscriptionError(f"quality digit after {ch!r}; only e, o, s, z take one", i + 1)
        if ch in "sz" and i > 0 and letters[i - 1] == ch:
            raise TranscriptionError(f"digit on the second letter of geminate {ch}{ch}", i + 1)
    if accent_pos < 0 or accent_pos > len(letters):
        raise TranscriptionError(
            f"accent position {accent_pos} outside 1..{len(letters)}", accent_pos
        )
    if accent_pos and letters[accent_pos - 1] not in VOWEL_LETTERS:
        raise TranscriptionError(
            f"accent falls on consonant {letters[accent_pos - 1]!r}", accent_pos
        )
    return DmiTranscription(annotated, accent_pos)


# -----------------------------------------------------------------------------
# Rule table


@dataclass(frozen=True)
class G2pRule:
    pattern: str
    left: str
    right: str
    outputs: tuple  # one or two alternatives, each a tuple of phones
    priority: int

    @property
    def may_voice(self) -> bool:
        return any(p in VOWEL_PHONES for alt in self.outputs for p in alt)

    def compiled(self):
        return _compile(self.left, self.right)


@lru_cache(maxsize=None)
def _compile(left, right):
    left_re = re.compile(f"(?:{left})$") if left else None
    right_re = re.compile(right) if right else None
    return left_re, right_re


class G2pRuleTable:
    """Ordered, first-match-wins grapheme rules.

    Rules are sorted by descending priority; priorities must be unique so the
    winner at every position is defined.
    """

    def __init__(self, rules: Iterable[G2pRule]):
        rules = sorted(rules, key=lambda r: -r.priority)
        seen = {}
        for r in rules:
            if r.priority in seen:
                raise ValueError(
                    f"rules {seen[r.priority].pattern!r} and {r.pattern!r} share priority {r.priority}"
                )
            seen[r.priority] = r
            for alt in r.outputs:
                for phone in alt:
                    if phone not in PHONES and phone != LENGTH:
                        raise ValueError(f"rule {r.pattern!r} emits unknown phone {phone!r}")
        self.rules = tuple(rules)
        self._by_first = {}
        for r in self.rules:
            self._by_first.setdefault(r.pattern[0], []).append(r)

    @classmethod
    def from_tsv(cls, text: str) -> "G2pRuleTable":
        rules = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 5:
                raise ValueError(f"line {lineno}: expected 5 tab-separated columns")
            pattern, left, right, output, priority = cols
            left = "" if left == "." else _expand(left)
            right = "" if right == "." else _expand(right)
            alts = tuple(
                () if alt.strip() == "_" else tuple(alt.split()) for alt in output.split("|")
            )
            if len(alts) > 2:
                raise ValueError(f"line {lineno}: at most two output alternatives")
            rules.append(G2pRule(pattern, left, right, alts, int(priority)))
        return cls(rules)

    def alphabet(self):
        return {r.pattern for r in self.rules if len(r.pattern) == 1 and not r.left and not r.right}

    def segment(self, bare: str, accent_index=None):
        """Cut ``bare`` into rule matches ``(rule, start, end)``.

        A rule that would swallow the stressed letter without producing a
        vowel is skipped, so a stressed ``i`` never becomes a glide or a
        silent diacritic.
        """
        out = []
        i = 0
        while i < len(bare):
            for rule in self._by_first.get(bare[i], ()):
                end = i + len(rule.pattern)
                if bare[i:end] != rule.pattern:
                    continue
                left_re, right_re = rule.compiled()
                if left_re is not None and not left_re.search(bare[:i]):
                    continue
                if right_re is not None and not right_re.match(bare, end):
                    continue
                if accent_index is not None and i <= accent_index < end and not rule.may_voice:
                    continue
                out.append((rule, i, end))
                i = end
                break
            else:
                raise ConversionError(f"no rule handles {bare[i]!r} at letter {i + 1} of {bare!r}")
        return out


def _expand(ctx: str) -> str:
    for macro, cls in _MACROS.items():
        ctx = ctx.replace(macro, cls)
    return ctx


@lru_cache(maxsize=1)
def default_rules() -> G2pRuleTable:
    text = resources.files("unilex").joinpath("data/g2p_it.tsv").read_text(encoding="utf-8")
    return G2pRuleTable.from_tsv(text)


# -----------------------------------------------------------------------------
# Syllabification


def _segments(phones: Sequence[str]):
    """Group phone indices into segments; a length mark joins its consonant."""
    segs = []
    for i, p in enumerate(phones):
        if p == LENGTH and segs:
            segs[-1].append(i)
        else:
            segs.append([i])
    return segs


def _legal_onset(cluster) -> bool:
    if len(cluster) > 1 and cluster[-1] in _GLIDES:
        cluster = cluster[:-1]
    if len(cluster) <= 1:
        return True
    if len(cluster) == 2:
        first, second = cluster
        return second in _LIQUIDS and (first in _STOPS or first in ("f", "v"))
    return False


def stress_onset(phones: Sequence[str], nucleus: int) -> int:
    """Index in ``phones`` where the syllable whose nucleus is ``nucleus`` begins."""
    segs = _segments(phones)
    seg_of = {}
    for k, seg in enumerate(segs):
        for i in seg:
            seg_of[i] = k
    k = seg_of[nucleus]
    run = []
    j = k - 1
    while j >= 0 and phones[segs[j][0]] not in VOWEL_PHONES:
        run.insert(0, j)
        j -= 1
    if j < 0:
        return 0
    for size in range(len(run), -1, -1):
        onset = run[len(run) - size:]
        # a geminate belongs to the coda and onset at once; treat it as one consonant
        if _legal_onset([phones[segs[s][0]] for s in onset]):
            return segs[onset[0]][0] if onset else segs[k][0]
    return segs[k][0]


def syllabify(phones: Sequence[str]):
    """Split stress-free phones into syllables (lists of phones)."""
    phones = [p for p in phones if p != STRESS]
    nuclei = [i for i, p in enumerate(phones) if p in VOWEL_PHONES]
    if not nuclei:
        return [list(phones)] if phones else []
    starts = [0] + [stress_onset(phones, n) for n in nuclei[1:]]
    bounds = starts + [len(phones)]
    return [phones[bounds[i]:bounds[i + 1]] for i in range(len(starts))]


# -----------------------------------------------------------------------------
# Conversion


def _choose(rule: G2pRule, digit):
    if digit == 2:
        if len(rule.outputs) < 2:
            raise ConversionError(f"quality 2 is not expressible for {rule.pattern!r}")
        return rule.outputs[1]
    return rule.outputs[0]


def _default_nucleus(letters, phones, nuclei_by_letter):
    vowels = [i for i, p in enumerate(phones) if p in VOWEL_PHONES]
    if not vowels:
        raise ConversionError("word has no vowel")
    if letters[-1] in VOWEL_LETTERS - set("aeiou") and len(letters) - 1 in nuclei_by_letter:
        return nuclei_by_letter[len(letters) - 1]
    return vowels[-2] if len(vowels) > 1 else vowels[0]


def dmi_to_sampa(transcription, accent_pos=None, *, rules=None, diagnostics=None) -> SampaTranscription:
    """Convert an annotated transcription to SAMPA phones with one stress mark.

    ``transcription`` may be a :class:`DmiTranscription` or an annotated
    string with ``accent_pos`` given separately.  Unannotated stressed
    ``e``/``o`` and unannotated ``z`` fall back to ``e``, ``o``, ``ts``; each
    fallback is appended to ``diagnostics`` when a list is supplied, and
    logged otherwise.
    """
    if isinstance(transcription, DmiTranscription):
        t = transcription
    else:
        t = validate_dmi(transcription, accent_pos or 0)
    rules = rules or default_rules()
    letters, digits = _split_annotated(t.annotated)
    bare = "".join(letters)
    accent = t.accent_pos - 1 if t.accent_pos else None

    phones = []
    nuclei_by_letter = {}
    for rule, start, end in rules.segment(bare, accent):
        for k in range(start + 1, end):
            if digits[k] is not None:
                raise ConversionError(
                    f"digit on letter {k + 1} inside {rule.pattern!r}; it belongs on letter {start + 1}"
                )
        digit = digits[start]
        head = letters[start]
        if digit is None and (head == "z" or (head in "eo" and start == accent)):
            msg = f"{t.annotated}: unannotated {head!r} at letter {start + 1}, assuming default quality"
            if diagnostics is not None:
                diagnostics.append(msg)
            else:
                logger.debug(msg)
        out = _choose(rule, digit)
        for k in range(start, end):
            if letters[k] in VOWEL_LETTERS:
                for off, p in enumerate(out):
                    if p in VOWEL_PHONES:
                        nuclei_by_letter.setdefault(k, len(phones) + off)
                        break
        phones.extend(out)

    if accent is not None:
        nucleus = nuclei_by_letter[accent]
    else:
        nucleus = _default_nucleus(letters, phones, nuclei_by_letter)
    onset = stress_onset(phones, nucleus)
    return SampaTranscription(tuple(phones[:onset]) + (STRESS,) + tuple(phones[onset:])).check()


def _preferences(head: str, stressed: bool):
    if head in "eo":
        return (1, 2) if stressed else (None, 2)
    if head == "s":
        return (None, 2)
    if head == "z":
        return (1, 2)
    return (None,)


def _align(bare, accent, phones, rules):
    """Try to explain ``phones`` with the given stressed letter.

    Returns ``(digits, nucleus)`` or raises AlignmentError with the phone
    position where alignment broke.
    """
    pos = 0
    digits = [None] * len(bare)
    nucleus = None
    for rule, start, end in rules.segment(bare, accent):
        for digit in _preferences(bare[start], start == accent):
            try:
                out = _choose(rule, digit)
            except ConversionError:
                continue
            if tuple(phones[pos:pos + len(out)]) == out:
                break
        else:
            raise AlignmentError(f"no reading of {bare[start:end]!r} matches", pos)
        digits[start] = digit
        if start <= accent < end:
            nucleus = pos + next(i for i, p in enumerate(out) if p in VOWEL_PHONES)
        pos += len(out)
    if pos != len(phones):
        raise AlignmentError(f"{len(phones) - pos} phones left over after {bare!r}", pos)
    return digits, nucleus


def sampa_to_dmi(sampa, word_form: str, *, rules=None) -> DmiTranscription:
    """Recover the canonical annotated transcription aligned to ``word_form``."""
    if isinstance(sampa, str):
        sampa = SampaTranscription.parse(sampa)
    rules = rules or default_rules()
    tokens = list(sampa.phones)
    if tokens.count(STRESS) != 1:
        raise AlignmentError("SAMPA input needs exactly one stress mark")
    mark = tokens.index(STRESS)
    phones = tokens[:mark] + tokens[mark + 1:]
    bare = word_form.lower()
    for i, ch in enumerate(bare):
        if ch not in LETTERS:
            raise AlignmentError(f"unsupported letter {ch!r} in {word_form!r}")

    furthest = 0
    for accent, ch in enumerate(bare):
        if ch not in VOWEL_LETTERS:
            continue
        try:
            digits, nucleus = _align(bare, accent, phones, rules)
        except AlignmentError as exc:
            furthest = max(furthest, exc.position or 0)
            continue
        except ConversionError:
            continue
        if nucleus is None or stress_onset(phones, nucleus) != mark:
            continue
        annotated = "".join(ch + (str(d) if d else "") for ch, d in zip(bare, digits))
        return DmiTranscription(annotated, accent + 1)
    raise AlignmentError(f"{sampa} does not align with {word_form!r}", furthest)


def canonicalize(transcription: DmiTranscription, *, rules=None) -> DmiTranscription:
    """The canonical annotation that sounds the same as ``transcription``."""
    return sampa_to_dmi(dmi_to_sampa(transcription, rules=rules), transcription.bare, rules=rules)
