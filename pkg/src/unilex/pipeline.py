"""The end-to-end pipeline as plain functions over in-memory records."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .formats import (
    TagMapping,
    parse_dmi,
    parse_edits,
    parse_layer_fixtures,
    parse_parole_lexicon,
    parse_tag_mapping,
)
from .errors import FormatError
from .inflection import expand_lexicon
from .lexdb import build_db, duplicate_homograph_mus
from .matching import balanced_match, index_dmi, mark_resolved
from .normalization import NormalizationConfig, apply_edits, normalize_dmi, normalize_parole, parse_normalization_config


@dataclass(frozen=True)
class PipelineConfig:
    dmi: Path
    parole: Path
    tag_mapping: Optional[Path] = None
    edits: Optional[Path] = None
    normalization: Optional[Path] = None
    layers: Optional[Path] = None
    out_dir: Optional[Path] = None
    strict: bool = True

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, str):
                object.__setattr__(self, f.name, Path(value))
        for name in ("dmi", "parole", "tag_mapping", "edits", "normalization", "layers"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                raise FileNotFoundError(f"{name}: {path} does not exist")


@dataclass
class PipelineResult:
    canonical: list
    ul: list
    report: object
    db: object
    splits: list
    unresolved: list
    stale: list


def match_sources(dmi_records, canonical, mapping: Optional[TagMapping], config: NormalizationConfig):
    """Normalize both sides and join them; returns ``(ul, report)``.

    Without a mapping the PAROLE tags are taken as the canonical tagset.
    """
    if mapping is None:
        mapping = TagMapping.identity({r.tag for r in canonical})
    tagset = mapping.canonical_tags
    config.check_tags(tagset)
    dmi = normalize_dmi(dmi_records, mapping, config)
    parole = normalize_parole(canonical, config, tagset)
    return balanced_match(parole, index_dmi(dmi))


def build_lexdb(ul, ginps, layers=None, directives=(), *, mu_decls=None, conflicts=(), strict=True, stale=None):
    """Apply edits, build the database and split homograph MUs.

    Returns ``(edited_ul, db, splits, unresolved)``.
    """
    edited = apply_edits(ul, directives, strict=strict, stale=stale)
    db = build_db(edited, ginps, layers, mu_decls)
    db, splits, unresolved = duplicate_homograph_mus(db, directives, conflicts)
    return edited, db, splits, unresolved


def _load(path: Optional[Path], parser, default=None):
    if path is None:
        return default
    try:
        return parser(path.read_bytes())
    except FormatError as exc:
        raise FormatError(exc.errors, str(path)) from None


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    mus, ginps = _load(config.parole, parse_parole_lexicon)
    canonical = expand_lexicon(mus, ginps)
    dmi = _load(config.dmi, parse_dmi)
    mapping = _load(config.tag_mapping, parse_tag_mapping)
    norm = _load(config.normalization, parse_normalization_config, NormalizationConfig())
    layers = _load(config.layers, parse_layer_fixtures)
    directives = _load(config.edits, parse_edits, [])

    ul, report = match_sources(dmi, canonical, mapping, norm)
    stale = []
    edited, db, splits, unresolved = build_lexdb(
        ul, ginps, layers, directives, mu_decls=mus, conflicts=report.conflicts,
        strict=config.strict, stale=stale,
    )
    report.conflicts = mark_resolved(report.conflicts, directives)
    report.post_edit_forms = len(edited)
    return PipelineResult(canonical, edited, report, db, splits, unresolved, stale)
