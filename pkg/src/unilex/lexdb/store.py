"""Persist a database as a directory of TSV tables plus a checksummed manifest."""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
from pathlib import Path

from ..errors import FormatError, IntegrityError
from ..inflection import Ginp, InflectionRule
from ..records import SemU, SynU
from .model import MU, CorrMuSynu, CorrPhuMu, CorrSynuSemu, LexDb, PhU, PhUV

MANIFEST = "manifest.json"
FORMAT = "unilex-lexdb"
VERSION = 1

# file stem -> (LexDb attribute, row type)
_TABLES = {
    "phu": ("phus", PhU),
    "phuv": ("phuvs", PhUV),
    "mu": ("mus", MU),
    "synu": ("synus", SynU),
    "semu": ("semus", SemU),
    "corr_phu_mu": ("corr_phu_mu", CorrPhuMu),
    "corr_mu_synu": ("corr_mu_synu", CorrMuSynu),
    "corr_synu_semu": ("corr_synu_semu", CorrSynuSemu),
}
_GINP_HEADER = ("ginp_id", "gramcat", "optional_tags")
_RULE_HEADER = ("ginp_id", "seq", "remove", "add", "tag")


def _tsv(header, rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _read_tsv(data: bytes, header, name):
    rows = list(csv.reader(io.StringIO(data.decode("utf-8")), delimiter="\t"))
    if not rows or tuple(rows[0]) != tuple(header):
        raise FormatError([(1, f"expected header {' '.join(header)}")], name)
    for n, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FormatError([(n, f"expected {len(header)} columns, got {len(row)}")], name)
    return rows[1:]


def _rows(db: LexDb, attr):
    table = getattr(db, attr)
    items = sorted(table.values(), key=lambda r: dataclasses.astuple(r)) if isinstance(table, dict) else sorted(set(table))
    return [dataclasses.astuple(r) for r in items]


def dump_tables(db: LexDb) -> dict:
    """File name -> bytes for every table of ``db``."""
    out = {}
    for stem, (attr, cls) in _TABLES.items():
        header = [f.name for f in dataclasses.fields(cls)]
        out[f"{stem}.tsv"] = _tsv(header, _rows(db, attr))
    ginps = [db.ginps[k] for k in sorted(db.ginps)]
    out["ginp.tsv"] = _tsv(_GINP_HEADER, [(g.ginp_id, g.gramcat, " ".join(sorted(g.optional_tags))) for g in ginps])
    out["ginp_rule.tsv"] = _tsv(
        _RULE_HEADER,
        [(g.ginp_id, i, r.remove, r.add, r.tag) for g in ginps for i, r in enumerate(g.rules, start=1)],
    )
    return out


def save_db(db: LexDb, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = dump_tables(db)
    manifest = {"format": FORMAT, "version": VERSION, "tables": {}}
    for name, data in files.items():
        (directory / name).write_bytes(data)
        manifest["tables"][name] = {
            "rows": data.count(b"\n") - 1,
            "sha256": hashlib.sha256(data).hexdigest(),
        }
    (directory / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return directory


def load_db(directory) -> LexDb:
    """Read a saved database, refusing files whose checksum does not match the manifest."""
    directory = Path(directory)
    try:
        manifest = json.loads((directory / MANIFEST).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise FormatError([(0, f"no {MANIFEST} in {directory}")], str(directory)) from None
    if manifest.get("format") != FORMAT or manifest.get("version") != VERSION:
        raise FormatError([(0, "not a unilex database manifest")], MANIFEST)
    files = {}
    for name, meta in manifest["tables"].items():
        data = (directory / name).read_bytes()
        if hashlib.sha256(data).hexdigest() != meta["sha256"]:
            raise IntegrityError(f"{name}: checksum does not match the manifest")
        files[name] = data

    db = LexDb()
    for stem, (attr, cls) in _TABLES.items():
        flds = dataclasses.fields(cls)
        header = [f.name for f in flds]
        rows = [
            cls(*(int(v) if f.type == "int" else v for f, v in zip(flds, row)))
            for row in _read_tsv(files[f"{stem}.tsv"], header, f"{stem}.tsv")
        ]
        if attr.startswith("corr_"):
            setattr(db, attr, rows)
        else:
            setattr(db, attr, {dataclasses.astuple(r)[0]: r for r in rows})
    rules = {}
    for ginp_id, seq, remove, add, tag in _read_tsv(files["ginp_rule.tsv"], _RULE_HEADER, "ginp_rule.tsv"):
        rules.setdefault(ginp_id, []).append((int(seq), InflectionRule(remove, add, tag)))
    for ginp_id, gramcat, optional in _read_tsv(files["ginp.tsv"], _GINP_HEADER, "ginp.tsv"):
        ordered = [r for _, r in sorted(rules.get(ginp_id, []), key=lambda p: p[0])]
        db.ginps[ginp_id] = Ginp(ginp_id, gramcat, ordered, optional.split())
    return db.sort_links()
