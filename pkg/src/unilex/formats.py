"""Readers and writers for every on-disk format.

Fixed-width layouts count columns in Unicode characters (NFC), so an
accented vowel occupies one column.

Readers take bytes, ``str`` content, or a file object; writers return bytes.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass

from lxml import etree

from .errors import FieldOverflowError, FormatError, TranscriptionError, UnmappedTagError
from .inflection import Ginp, InflectionRule
from .phonology import count_letters, strip_digits, validate_dmi
from .records import (
    EDIT_KINDS,
    CanonicalRecord,
    DmiRecord,
    EditDirective,
    LayerFixtures,
    MorphUnitDecl,
    MuRef,
    SemU,
    SynU,
    UnifiedRecord,
    join_tag,
    split_tag,
)

logger = logging.getLogger(__name__)


def read_text(source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        source = bytes(source).decode("utf-8")
    return unicodedata.normalize("NFC", source)


def _lines(source):
    text = read_text(source)
    if not text:
        return []
    if text.endswith("\n"):
        text = text[:-1]
    return text.split("\n")


# -----------------------------------------------------------------------------
# Fixed-width layouts


@dataclass(frozen=True)
class Column:
    name: str
    width: int
    numeric: bool = False
    optional: bool = False


DMI_LAYOUT = (
    Column("lemma", 24),
    Column("word_form", 24),
    Column("transcription", 32),
    Column("accent_pos", 2, numeric=True),
    Column("gramcat", 2),
    Column("morph_feats", 6, optional=True),
)
CANONICAL_LAYOUT = (
    Column("lemma", 24),
    Column("word_form", 24),
    Column("tag", 12),
    Column("ginp_id", 8),
)
UNIFIED_LAYOUT = CANONICAL_LAYOUT + (
    Column("transcription", 32),
    Column("accent_pos", 2, numeric=True),
)
# sense column, written only for rows recovered for one homograph
UNIFIED_SENSE = Column("synu_id", 24, optional=True)


def _format_line(values, layout) -> str:
    parts = []
    for col in layout:
        value = values[col.name]
        text = str(value)
        if len(text) > col.width:
            raise FieldOverflowError(
                f"{col.name} {text!r} is {len(text)} characters, column holds {col.width}"
            )
        if any(ch.isspace() for ch in text):
            raise FieldOverflowError(f"{col.name} {text!r} contains whitespace")
        if not text and not col.optional:
            raise FieldOverflowError(f"{col.name} is empty")
        parts.append(text.rjust(col.width) if col.numeric else text.ljust(col.width))
    return "".join(parts)


def _scan_line(line, layout):
    """Slice one line into a dict of field values, or raise ValueError."""
    width = sum(c.width for c in layout)
    if len(line) > width:
        raise ValueError(f"line is {len(line)} characters, layout allows {width}")
    line = line.ljust(width)
    values = {}
    pos = 0
    for col in layout:
        raw = line[pos:pos + col.width]
        pos += col.width
        text = raw.strip()
        if col.numeric:
            if not text:
                values[col.name] = 0
                continue
            if not text.isdigit() or raw.rstrip() != raw:
                raise ValueError(f"{col.name} {raw!r} is not a right-aligned number")
            values[col.name] = int(text)
            continue
        if text and raw[0].isspace():
            raise ValueError(f"{col.name} {raw!r} is not left-aligned")
        if any(ch.isspace() for ch in text):
            raise ValueError(f"{col.name} {raw!r} has embedded whitespace (field overflow?)")
        if not text and not col.optional:
            raise ValueError(f"{col.name} is empty")
        values[col.name] = text
    return values


def check_dmi_record(rec: DmiRecord):
    """Problems with ``rec`` as a list of messages (empty when valid)."""
    problems = []
    for name in ("lemma", "word_form"):
        value = getattr(rec, name)
        if not value or any(ch.isspace() for ch in value):
            problems.append(f"{name} must be nonempty without whitespace")
    if strip_digits(rec.transcription) != rec.word_form.lower():
        problems.append(
            f"transcription {rec.transcription!r} does not strip to word form {rec.word_form!r}"
        )
    letters = count_letters(rec.word_form)
    if not 0 <= rec.accent_pos <= letters:
        problems.append(f"accent position {rec.accent_pos} beyond {letters} letters")
    if not rec.gramcat:
        problems.append("gramcat is empty")
    return problems


def parse_dmi(source, *, strict=True, errors=None) -> list:
    """Read DMI fixed-width lines.

    Strict mode raises one :class:`FormatError` listing every bad line.
    Lenient mode skips bad lines, appending ``(line, message)`` pairs to
    ``errors`` when a list is supplied.
    """
    records, problems = [], []
    for lineno, line in enumerate(_lines(source), 1):
        try:
            values = _scan_line(line, DMI_LAYOUT)
        except ValueError as exc:
            problems.append((lineno, str(exc)))
            continue
        rec = DmiRecord(**values)
        bad = check_dmi_record(rec)
        if bad:
            problems.append((lineno, "; ".join(bad)))
            continue
        records.append(rec)
    if problems:
        if strict:
            raise FormatError(problems, "DMI")
        if errors is not None:
            errors.extend(problems)
        for lineno, msg in problems:
            logger.warning("DMI line %d skipped: %s", lineno, msg)
    return records


def write_dmi(records) -> bytes:
    lines = []
    for rec in records:
        bad = check_dmi_record(rec)
        if bad:
            raise FormatError([(0, "; ".join(bad))], "DMI")
        lines.append(_format_line(rec.__dict__, DMI_LAYOUT))
    return _join(lines)


def _join(lines) -> bytes:
    return "".join(line + "\n" for line in lines).encode("utf-8")


def parse_canonical(source) -> list:
    records, problems = [], []
    for lineno, line in enumerate(_lines(source), 1):
        try:
            records.append(CanonicalRecord(**_scan_line(line, CANONICAL_LAYOUT)))
        except ValueError as exc:
            problems.append((lineno, str(exc)))
    if problems:
        raise FormatError(problems, "canonical")
    return records


def write_canonical(records) -> bytes:
    return _join(_format_line(rec.__dict__, CANONICAL_LAYOUT) for rec in records)


def parse_unified(source) -> list:
    records, problems = [], []
    width = sum(c.width for c in UNIFIED_LAYOUT)
    for lineno, line in enumerate(_lines(source), 1):
        try:
            values = _scan_line(line[:width], UNIFIED_LAYOUT)
            values.update(_scan_line(line[width:], (UNIFIED_SENSE,)))
            rec = UnifiedRecord(**values)
            if strip_digits(rec.transcription) != rec.word_form.lower():
                raise ValueError(f"transcription {rec.transcription!r} does not match {rec.word_form!r}")
        except ValueError as exc:
            problems.append((lineno, str(exc)))
            continue
        records.append(rec)
    if problems:
        raise FormatError(problems, "unified")
    return records


def write_unified(records) -> bytes:
    lines = []
    for rec in records:
        line = _format_line(rec.__dict__, UNIFIED_LAYOUT)
        if rec.synu_id:
            line += _format_line(rec.__dict__, (UNIFIED_SENSE,))
        lines.append(line)
    return _join(lines)


# -----------------------------------------------------------------------------
# XML


def _xml_parser(**kw):
    return etree.XMLParser(resolve_entities=False, no_network=True, remove_comments=True, **kw)


def parse_xml(source, what):
    text = read_text(source)
    if not text.strip():
        return None
    try:
        return etree.fromstring(text.encode("utf-8"), _xml_parser())
    except etree.XMLSyntaxError as exc:
        raise FormatError([(exc.lineno or 0, str(exc))], what) from None


def _attr(el, name, problems, required=True):
    value = el.get(name)
    if value is None and required:
        problems.append((el.sourceline, f"<{el.tag}> lacks attribute {name!r}"))
    return value


def parse_parole_lexicon(source):
    """Read ``<MorphLexicon>`` into (MorphUnitDecl list, {ginp_id: Ginp})."""
    root = parse_xml(source, "morphological lexicon")
    if root is None:
        return [], {}
    if root.tag != "MorphLexicon":
        raise FormatError([(root.sourceline, f"root element is <{root.tag}>, expected <MorphLexicon>")])
    problems = []
    mus, ginps = [], {}
    seen_mu = set()
    for el in root:
        if el.tag == "Mu":
            values = [_attr(el, a, problems) for a in ("id", "lemma", "gramcat", "ginp")]
            if None in values:
                continue
            if values[0] in seen_mu:
                problems.append((el.sourceline, f"duplicate MU id {values[0]!r}"))
                continue
            seen_mu.add(values[0])
            mus.append((el.sourceline, MorphUnitDecl(*values)))
        elif el.tag == "Ginp":
            ginp = _parse_ginp(el, problems)
            if ginp is None:
                continue
            if ginp.ginp_id in ginps:
                problems.append((el.sourceline, f"duplicate Ginp id {ginp.ginp_id!r}"))
                continue
            ginps[ginp.ginp_id] = ginp
        else:
            problems.append((el.sourceline, f"unexpected element <{el.tag}>"))
    for line, mu in mus:
        if mu.ginp_id not in ginps:
            problems.append((line, f"MU {mu.mu_id} points at unresolved Ginp {mu.ginp_id!r}"))
    if problems:
        raise FormatError(problems, "morphological lexicon")
    return [mu for _, mu in mus], ginps


def _parse_ginp(el, problems):
    ginp_id = _attr(el, "id", problems)
    rules = []
    for rule_el in el:
        if rule_el.tag != "Rule":
            problems.append((rule_el.sourceline, f"unexpected element <{rule_el.tag}> in Ginp"))
            continue
        values = [_attr(rule_el, a, problems) for a in ("remove", "add", "tag")]
        if None in values:
            continue
        try:
            rules.append(InflectionRule(*values))
        except ValueError as exc:
            problems.append((rule_el.sourceline, str(exc)))
    if ginp_id is None:
        return None
    gramcat = el.get("gramcat") or (split_tag(rules[0].tag)[0] if rules else "")
    optional = (el.get("optional") or "").split()
    try:
        return Ginp(ginp_id, gramcat, rules, frozenset(optional))
    except ValueError as exc:
        problems.append((el.sourceline, str(exc)))
        return None


def write_parole_lexicon(mus, ginps) -> bytes:
    root = etree.Element("MorphLexicon")
    for mu in mus:
        etree.SubElement(root, "Mu", id=mu.mu_id, lemma=mu.lemma, gramcat=mu.gramcat, ginp=mu.ginp_id)
    for ginp in ginps.values():
        el = etree.SubElement(root, "Ginp", id=ginp.ginp_id, gramcat=ginp.gramcat)
        if ginp.optional_tags:
            el.set("optional", " ".join(sorted(ginp.optional_tags)))
        for rule in ginp.rules:
            etree.SubElement(el, "Rule", remove=rule.remove, add=rule.add, tag=rule.tag)
    return etree.tostring(root, encoding="UTF-8", xml_declaration=True, pretty_print=True)


def parse_layer_fixtures(source) -> LayerFixtures:
    """Read the pre-existing syntax and semantics layers.

    Each ``<SynU>`` names its morphological unit by ``lemma``/``gramcat``
    (and ``ginp`` when the lemma has several patterns), because MU ids are
    only assigned when the database is built.
    """
    root = parse_xml(source, "layer fixtures")
    out = LayerFixtures([], [], [], [])
    if root is None:
        return out
    problems = []
    synu_ids, semu_ids = set(), set()
    pending = []
    for section in root:
        for el in section:
            if el.tag == "SynU":
                sid, naming = _attr(el, "id", problems), _attr(el, "naming", problems)
                lemma, gramcat = _attr(el, "lemma", problems), _attr(el, "gramcat", problems)
                if None in (sid, naming, lemma, gramcat):
                    continue
                if sid in synu_ids:
                    problems.append((el.sourceline, f"duplicate SynU id {sid!r}"))
                    continue
                synu_ids.add(sid)
                out.synus.append(SynU(sid, naming, el.get("example", "")))
                out.synu_mu.append(MuRef(sid, lemma, gramcat, el.get("ginp")))
                for link in el.iter("CorrespSynUsemU"):
                    target = _attr(link, "targetsemu", problems)
                    if target is not None:
                        pending.append((link.sourceline, sid, target))
            elif el.tag == "SemU":
                sid, naming = _attr(el, "id", problems), _attr(el, "naming", problems)
                if None in (sid, naming):
                    continue
                if sid in semu_ids:
                    problems.append((el.sourceline, f"duplicate SemU id {sid!r}"))
                    continue
                semu_ids.add(sid)
                out.semus.append(
                    SemU(sid, naming, el.get("example", ""), el.get("freedefinition", ""),
                         el.get("weightvalsemfeaturel", ""))
                )
            else:
                problems.append((el.sourceline, f"unexpected element <{el.tag}>"))
    for line, synu, semu in pending:
        if semu not in semu_ids:
            problems.append((line, f"SynU {synu} links to undeclared SemU {semu!r}"))
        else:
            out.synu_semu.append((synu, semu))
    if problems:
        raise FormatError(problems, "layer fixtures")
    return out


def write_layer_fixtures(layers: LayerFixtures) -> bytes:
    root = etree.Element("LayerFixtures")
    syn = etree.SubElement(root, "ParoleSyntaxe")
    refs = {r.synu_id: r for r in layers.synu_mu}
    for synu in layers.synus:
        ref = refs[synu.synu_id]
        el = etree.SubElement(syn, "SynU", id=synu.synu_id, naming=synu.naming)
        if synu.example:
            el.set("example", synu.example)
        el.set("lemma", ref.lemma)
        el.set("gramcat", ref.gramcat)
        if ref.ginp_id is not None:
            el.set("ginp", ref.ginp_id)
        for s, target in layers.synu_semu:
            if s == synu.synu_id:
                etree.SubElement(el, "CorrespSynUsemU", targetsemu=target)
    sem = etree.SubElement(root, "ParoleSemant")
    for semu in layers.semus:
        el = etree.SubElement(sem, "SemU", id=semu.semu_id, naming=semu.naming)
        for attr, value in (("example", semu.example), ("freedefinition", semu.freedefinition),
                            ("weightvalsemfeaturel", semu.semfeature)):
            if value:
                el.set(attr, value)
    return etree.tostring(root, encoding="UTF-8", xml_declaration=True, pretty_print=True)


# -----------------------------------------------------------------------------
# Edits and tag mapping


_PAYLOAD_SIZE = {"set-transcription": 2, "suppress-form": 0, "remap-tag": 1}


def parse_edits(source) -> list:
    """Read the edits file: ``kind lemma word_form tag synu_id|- payload...``."""
    directives, problems = [], []
    for lineno, line in enumerate(_lines(source), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t") if "\t" in line else line.split()
        cols = [c.strip() for c in cols]
        kind = cols[0]
        if kind not in EDIT_KINDS:
            problems.append((lineno, f"unknown edit kind {kind!r}"))
            continue
        if len(cols) != 5 + _PAYLOAD_SIZE[kind]:
            problems.append((lineno, f"{kind} takes {_PAYLOAD_SIZE[kind]} payload fields"))
            continue
        lemma, word_form, tag, synu = cols[1:5]
        if not (lemma and word_form and tag and synu):
            problems.append((lineno, "selector fields must be nonempty"))
            continue
        kw = dict(line=lineno, synu_id=None if synu == "-" else synu)
        if kind == "set-transcription":
            transcription, accent = cols[5:]
            if not accent.isdigit():
                problems.append((lineno, f"accent position {accent!r} is not a number"))
                continue
            if strip_digits(transcription) != word_form.lower():
                problems.append((lineno, f"transcription {transcription!r} does not match {word_form!r}"))
                continue
            try:
                validate_dmi(transcription, int(accent))
            except TranscriptionError as exc:
                problems.append((lineno, str(exc)))
                continue
            kw.update(transcription=transcription, accent_pos=int(accent))
        elif kind == "remap-tag":
            kw.update(new_tag=cols[5])
        directives.append(EditDirective(kind, lemma, word_form, tag, **kw))
    if problems:
        raise FormatError(problems, "edits")
    return directives


def write_edits(directives) -> bytes:
    lines = []
    for d in directives:
        cols = [d.kind, d.lemma, d.word_form, d.tag, d.synu_id or "-"]
        if d.kind == "set-transcription":
            cols += [d.transcription, str(d.accent_pos)]
        elif d.kind == "remap-tag":
            cols.append(d.new_tag)
        lines.append("\t".join(cols))
    return _join(lines)


class TagMapping:
    """Source ``(gramcat, feats)`` pairs to canonical ``GRAMCAT-FEATS`` tags."""

    def __init__(self, rows=None):
        self.rows = {}
        targets = {}
        for (gramcat, feats), tag in (rows or {}).items():
            if tag in targets:
                raise ValueError(f"{gramcat}/{feats} and {targets[tag]} both map to {tag}")
            targets[tag] = f"{gramcat}/{feats}"
            self.rows[(gramcat, feats)] = tag
        # a canonical tag that is also a source tag must map to itself, so mapping twice is harmless
        for tag in targets:
            again = self.rows.get(split_tag(tag))
            if again is not None and again != tag:
                raise ValueError(f"canonical tag {tag} is remapped to {again}")
        self._canonical = frozenset(targets)

    def __eq__(self, other):
        return isinstance(other, TagMapping) and self.rows == other.rows

    def __len__(self):
        return len(self.rows)

    @property
    def canonical_tags(self) -> frozenset:
        return self._canonical

    def map(self, gramcat: str, feats: str) -> str:
        """Canonical tag for a source tag; canonical tags map to themselves."""
        tag = self.rows.get((gramcat, feats))
        if tag is not None:
            return tag
        tag = join_tag(gramcat, feats)
        if tag in self.canonical_tags:
            return tag
        raise UnmappedTagError(f"no mapping for tag {tag!r}")

    @classmethod
    def identity(cls, tags):
        return cls({split_tag(t): t for t in tags})


def parse_tag_mapping(source) -> TagMapping:
    rows, problems = {}, []
    for lineno, line in enumerate(_lines(source), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3 or not cols[0] or not cols[2]:
            problems.append((lineno, "expected source_gramcat<TAB>source_feats<TAB>canonical_tag"))
            continue
        key = (cols[0], cols[1])
        if key in rows:
            problems.append((lineno, f"source tag {join_tag(*key)} mapped twice"))
            continue
        rows[key] = cols[2]
    if problems:
        raise FormatError(problems, "tag mapping")
    try:
        return TagMapping(rows)
    except ValueError as exc:
        raise FormatError([(0, str(exc))], "tag mapping") from None


def write_tag_mapping(mapping: TagMapping) -> bytes:
    return _join(f"{g}\t{f}\t{t}" for (g, f), t in mapping.rows.items())

