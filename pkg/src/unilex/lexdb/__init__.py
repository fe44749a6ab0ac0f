"""Four-layer lexical database: phonology, morphology, syntax, semantics."""

from .build import MuSplit, build_db, duplicate_homograph_mus
from .model import (
    MU,
    CorrMuSynu,
    CorrPhuMu,
    CorrSynuSemu,
    EntryGraph,
    LexDb,
    PhU,
    PhUV,
    integrity_check,
    lookup,
    require_integrity,
    stats,
    subset,
)
from .store import load_db, save_db
from .xmlio import export_xml, import_xml, validate

__all__ = [
    "MU", "CorrMuSynu", "CorrPhuMu", "CorrSynuSemu", "EntryGraph", "LexDb", "MuSplit", "PhU", "PhUV",
    "build_db", "duplicate_homograph_mus", "export_xml", "import_xml", "integrity_check", "load_db",
    "lookup", "require_integrity", "save_db", "stats", "subset", "validate",
]
