"""Deterministic passes that make the two sources parallel before matching.

Each pass takes and returns a list of records and is idempotent.
"""

from __future__ import annotations

import configparser
import dataclasses
import logging
from dataclasses import dataclass, field

from .errors import FormatError, StaleEditError, StressConventionError, UnmappedTagError
from .formats import read_text
from .phonology import strip_digits, validate_dmi
from .records import DmiRecord, split_tag

logger = logging.getLogger(__name__)

APOSTROPHE_TO_ACCENT = "apostrophe-to-accent"
ACCENT_TO_APOSTROPHE = "accent-to-apostrophe"
CONVENTIONS = (APOSTROPHE_TO_ACCENT, ACCENT_TO_APOSTROPHE)

_GRAVE = {"a": "à", "e": "è", "i": "ì", "o": "ò", "u": "ù"}
_ACUTE = {"e": "é", "o": "ó"}
_UNACCENT = {"à": "a", "è": "e", "é": "e", "ì": "i", "í": "i", "ò": "o", "ó": "o", "ù": "u", "ú": "u"}
# quality digit implied by an accented letter in a transcription
_ACCENT_DIGIT = {"é": "1", "è": "2", "ó": "1", "ò": "2"}
# final -é rather than -è: perché, poiché, né, sé, ventitré
_ACUTE_E_ENDINGS = ("ch", "tr")
_ACUTE_E_WORDS = ("n", "s")


@dataclass(frozen=True)
class NormalizationConfig:
    drop_optional_tags: frozenset = field(default_factory=frozenset)
    stress_convention: str = APOSTROPHE_TO_ACCENT
    sort: bool = True

    def __post_init__(self):
        object.__setattr__(self, "drop_optional_tags", frozenset(self.drop_optional_tags))
        if self.stress_convention not in CONVENTIONS:
            raise ValueError(f"unknown stress convention {self.stress_convention!r}")

    def check_tags(self, tagset):
        unknown = self.drop_optional_tags - set(tagset)
        if unknown:
            raise UnmappedTagError(f"drop_optional_tags not in the canonical tagset: {sorted(unknown)}")


def _value(raw: str):
    raw = raw.strip()
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        raw = raw[1:-1]
    return raw


def parse_normalization_config(source) -> NormalizationConfig:
    """Read ``key = value`` lines (INI or flat TOML style)."""
    text = read_text(source)
    if not text.lstrip().startswith("["):
        text = "[normalization]\n" + text
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise FormatError([(0, str(exc))], "normalization config") from None
    kw = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            if key == "drop_optional_tags":
                raw = raw.strip().lstrip("[").rstrip("]")
                kw[key] = frozenset(_value(t) for t in raw.replace(",", " ").split())
            elif key == "stress_convention":
                kw[key] = _value(raw)
            elif key == "sort":
                value = _value(raw).lower()
                if value not in ("true", "false", "yes", "no", "1", "0"):
                    raise FormatError([(0, f"sort must be a boolean, got {raw!r}")], "normalization config")
                kw[key] = value in ("true", "yes", "1")
            else:
                raise FormatError([(0, f"unknown key {key!r}")], "normalization config")
    try:
        return NormalizationConfig(**kw)
    except ValueError as exc:
        raise FormatError([(0, str(exc))], "normalization config") from None


def write_normalization_config(config: NormalizationConfig) -> bytes:
    return (
        f"drop_optional_tags = {', '.join(sorted(config.drop_optional_tags))}\n"
        f"stress_convention = {config.stress_convention}\n"
        f"sort = {'true' if config.sort else 'false'}\n"
    ).encode("utf-8")


# -----------------------------------------------------------------------------
# Stress orthography


def _acute_e(stem: str) -> bool:
    stem = strip_digits(stem).lower()
    return stem.endswith(_ACUTE_E_ENDINGS) or stem in _ACUTE_E_WORDS


def normalize_stress(text: str, convention: str, *, transcription=False) -> str:
    """Rewrite final stress as an accented letter or as a trailing apostrophe.

    In a transcription the digit on ``e``/``o`` picks acute or grave
    (``perche1'`` <-> ``perché``); in plain orthography a bare final ``e'``
    becomes ``é`` after ``ch``/``tr`` and in ``ne'``/``se'``, ``è`` otherwise.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown stress convention {convention!r}")
    idx = text.find("'")
    if idx != -1 and idx != len(text) - 1:
        raise StressConventionError(f"apostrophe inside {text!r}; only a final one marks stress")

    if convention == APOSTROPHE_TO_ACCENT:
        if idx == -1:
            return text
        body = text[:-1]
        digit = ""
        if body and body[-1].isdigit():
            body, digit = body[:-1], body[-1]
        if not body or body[-1].lower() not in _GRAVE:
            raise StressConventionError(f"stress apostrophe after a consonant in {text!r}")
        vowel, stem = body[-1].lower(), body[:-1]
        if vowel in _ACUTE and (digit == "1" or (not digit and vowel == "e" and _acute_e(stem))):
            accented = _ACUTE[vowel]
        else:
            accented = _GRAVE[vowel]
        return stem + (accented.upper() if body[-1].isupper() else accented)

    if idx != -1:
        return text
    if not text or text[-1] not in _UNACCENT:
        return text
    last = text[-1]
    digit = _ACCENT_DIGIT.get(last, "") if transcription else ""
    return text[:-1] + _UNACCENT[last] + digit + "'"


def _with_stress(rec, convention):
    changes = {}
    for name in ("lemma", "word_form"):
        changes[name] = normalize_stress(getattr(rec, name), convention)
    if hasattr(rec, "transcription"):
        changes["transcription"] = normalize_stress(rec.transcription, convention, transcription=True)
    return dataclasses.replace(rec, **changes)


def normalize_stress_records(records, convention):
    return [_with_stress(rec, convention) for rec in records]


# -----------------------------------------------------------------------------
# Other passes


def sort_records(records):
    """Stable sort by (lemma, word_form, tag) in code-point (= UTF-8 byte) order."""
    return sorted(records, key=lambda r: (r.lemma, r.word_form, r.tag))


def map_tags(records, mapping):
    out, unmapped = [], set()
    for rec in records:
        if isinstance(rec, DmiRecord):
            gramcat, feats = rec.gramcat, rec.morph_feats
        else:
            gramcat, feats = split_tag(rec.tag)
        try:
            tag = mapping.map(gramcat, feats)
        except UnmappedTagError:
            unmapped.add(rec.tag)
            continue
        if isinstance(rec, DmiRecord):
            g, f = split_tag(tag)
            out.append(dataclasses.replace(rec, gramcat=g, morph_feats=f))
        else:
            out.append(dataclasses.replace(rec, tag=tag))
    if unmapped:
        raise UnmappedTagError(f"unmapped tags: {', '.join(sorted(unmapped))}")
    return out


def check_tagset(records, tagset):
    """Raise on any record whose tag is outside ``tagset``."""
    unknown = {r.tag for r in records} - set(tagset)
    if unknown:
        raise UnmappedTagError(f"tags outside the canonical tagset: {', '.join(sorted(unknown))}")
    return records


def drop_optional_forms(records, config: NormalizationConfig):
    kept = [r for r in records if r.tag not in config.drop_optional_tags]
    if len(kept) != len(records):
        logger.info("dropped %d optional forms (%s)", len(records) - len(kept),
                    ", ".join(sorted(config.drop_optional_tags)))
    return kept


def normalize_dmi(records, mapping, config: NormalizationConfig):
    records = map_tags(records, mapping)
    records = normalize_stress_records(records, config.stress_convention)
    records = drop_optional_forms(records, config)
    return sort_records(records) if config.sort else records


def normalize_parole(records, config: NormalizationConfig, tagset=None):
    if tagset is not None:
        check_tagset(records, tagset)
    records = normalize_stress_records(records, config.stress_convention)
    records = drop_optional_forms(records, config)
    return sort_records(records) if config.sort else records


# -----------------------------------------------------------------------------
# Edits


def _selects(directive, rec):
    if rec.window != directive.window:
        return False
    if directive.synu_id is None:
        return True
    if directive.kind == "set-transcription":
        return rec.synu_id in ("", directive.synu_id)
    return rec.synu_id == directive.synu_id


def apply_edits(records, directives, *, strict=True, stale=None):
    """Apply edit directives in order.

    A ``set-transcription`` that names a syntactic unit adds (or updates) a
    row carrying that unit's pronunciation next to the ordinary row, which
    is how the second reading of a homograph enters the lexicon.

    A directive whose selector matches nothing raises StaleEditError in
    strict mode; otherwise it is skipped and appended to ``stale``.
    """
    records = list(records)
    for d in directives:
        hits = [i for i, rec in enumerate(records) if _selects(d, rec)]
        if not hits:
            if strict:
                raise StaleEditError(f"stale edit, selector matches nothing: {d.describe()}")
            logger.warning("stale edit skipped: %s", d.describe())
            if stale is not None:
                stale.append(d)
            continue
        if d.kind == "suppress-form":
            drop = set(hits)
            records = [rec for i, rec in enumerate(records) if i not in drop]
        elif d.kind == "remap-tag":
            for i in hits:
                records[i] = dataclasses.replace(records[i], tag=d.new_tag)
        else:
            if strip_digits(d.transcription) != d.word_form.lower():
                raise StaleEditError(f"{d.describe()}: transcription does not match the word form")
            validate_dmi(d.transcription, d.accent_pos)
            new = dict(transcription=d.transcription, accent_pos=d.accent_pos)
            if d.synu_id is None:
                for i in hits:
                    records[i] = dataclasses.replace(records[i], **new)
                continue
            scoped = [i for i in hits if records[i].synu_id == d.synu_id]
            if scoped:
                for i in scoped:
                    records[i] = dataclasses.replace(records[i], **new)
            else:
                base = records[hits[0]]
                records.insert(hits[-1] + 1, dataclasses.replace(base, synu_id=d.synu_id, **new))
    return records
