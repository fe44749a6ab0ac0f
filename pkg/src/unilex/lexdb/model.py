"""Entity and correspondence tables of the four-layer lexical database."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field, fields

from ..errors import ConversionError, IntegrityError, TranscriptionError
from ..phonology import dmi_to_sampa, strip_digits, validate_dmi
from ..records import SemU, SynU

GRAMCAT_NAMES = {
    "N": "NOUN",
    "V": "VERB",
    "A": "ADJECTIVE",
    "B": "ADVERB",
    "C": "CONJUNCTION",
    "E": "PREPOSITION",
    "P": "PRONOUN",
    "R": "ARTICLE",
    "I": "INTERJECTION",
}
GRAMCAT_CODES = {name: code for code, name in GRAMCAT_NAMES.items()}


def gramcat_name(code: str) -> str:
    return GRAMCAT_NAMES.get(code, code)


def gramcat_code(name: str) -> str:
    return GRAMCAT_CODES.get(name, name)


@dataclass(frozen=True, order=True)
class PhU:
    phu_id: str
    naming: str
    dmi: str
    accent_pos: int
    sampa: str


@dataclass(frozen=True, order=True)
class PhUV:
    phuv_id: str
    phu_id: str
    dmi: str
    accent_pos: int
    sampa: str


@dataclass(frozen=True, order=True)
class MU:
    mu_id: str
    naming: str
    gramcat: str
    ginp_id: str
    gramsubcat: str = "WITHOUTSC"
    autonomy: str = "WITHOUTB"
    homograph_of: str = ""


@dataclass(frozen=True, order=True)
class CorrPhuMu:
    phu_id: str
    mu_id: str
    gramcat: str
    morph_feat: str


@dataclass(frozen=True, order=True)
class CorrMuSynu:
    mu_id: str
    synu_id: str


@dataclass(frozen=True, order=True)
class CorrSynuSemu:
    synu_id: str
    semu_id: str


ENTITY_TABLES = ("phus", "phuvs", "mus", "ginps", "synus", "semus")
LINK_TABLES = ("corr_phu_mu", "corr_mu_synu", "corr_synu_semu")


@dataclass
class LexDb:
    phus: dict = field(default_factory=dict)
    phuvs: dict = field(default_factory=dict)
    mus: dict = field(default_factory=dict)
    ginps: dict = field(default_factory=dict)
    synus: dict = field(default_factory=dict)
    semus: dict = field(default_factory=dict)
    corr_phu_mu: list = field(default_factory=list)
    corr_mu_synu: list = field(default_factory=list)
    corr_synu_semu: list = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, LexDb):
            return NotImplemented
        return self.tables() == other.tables()

    def tables(self) -> dict:
        """Every table as a dict (entities) or a sorted list (links)."""
        out = {name: dict(getattr(self, name)) for name in ENTITY_TABLES}
        out.update({name: sorted(set(getattr(self, name))) for name in LINK_TABLES})
        return out

    def copy(self) -> "LexDb":
        return LexDb(**{f.name: type(getattr(self, f.name))(getattr(self, f.name)) for f in fields(self)})

    def sort_links(self):
        for name in LINK_TABLES:
            setattr(self, name, sorted(set(getattr(self, name))))
        return self

    def merge(self, other: "LexDb") -> "LexDb":
        """Union of two databases; a shared id must denote identical rows."""
        out = self.copy()
        for name in ENTITY_TABLES:
            mine = getattr(out, name)
            for key, row in getattr(other, name).items():
                if key in mine and mine[key] != row:
                    raise IntegrityError(f"{name}: {key} differs between the merged databases")
                mine[key] = row
        for name in LINK_TABLES:
            setattr(out, name, list(getattr(out, name)) + list(getattr(other, name)))
        return out.sort_links()

    # -- navigation --------------------------------------------------------

    def mus_of_phu(self, phu_id):
        return sorted({c.mu_id for c in self.corr_phu_mu if c.phu_id == phu_id})

    def phus_of_mu(self, mu_id):
        return sorted({c.phu_id for c in self.corr_phu_mu if c.mu_id == mu_id})

    def synus_of_mu(self, mu_id):
        return sorted({c.synu_id for c in self.corr_mu_synu if c.mu_id == mu_id})

    def mu_of_synu(self, synu_id):
        mus = [c.mu_id for c in self.corr_mu_synu if c.synu_id == synu_id]
        return mus[0] if len(mus) == 1 else None

    def semus_of_synu(self, synu_id):
        return sorted({c.semu_id for c in self.corr_synu_semu if c.synu_id == synu_id})

    def synus_of_semu(self, semu_id):
        return sorted({c.synu_id for c in self.corr_synu_semu if c.semu_id == semu_id})

    def reachable_phus(self, semu_id) -> frozenset:
        """PhUs reached from a SemU through SynU, MU and the PhU-MU table."""
        phus = set()
        for synu in self.synus_of_semu(semu_id):
            for c in self.corr_mu_synu:
                if c.synu_id == synu:
                    phus.update(self.phus_of_mu(c.mu_id))
        return frozenset(phus)


def next_id(base: str, taken, start=2) -> str:
    """``base`` if free, else ``base`` + the first free number from ``start``."""
    if base not in taken:
        return base
    n = start
    while f"{base}{n}" in taken:
        n += 1
    return f"{base}{n}"


def sampa_for(dmi: str, accent_pos: int) -> str:
    return str(dmi_to_sampa(validate_dmi(dmi, accent_pos)))


def _dangling(out, table, left, right, left_space, right_space):
    """One message per link row, naming every id that does not resolve."""
    missing = [f"unknown {kind} {i}" for i, (kind, ids) in ((left, left_space), (right, right_space))
               if i not in ids]
    if missing:
        out.append(f"{table} {left}->{right}: {', '.join(missing)}")


def integrity_check(db: LexDb) -> list:
    """Every referential or table-invariant violation, as messages; empty means sound."""
    out = []
    for phu in db.phus.values():
        if strip_digits(phu.dmi) != phu.naming.lower():
            out.append(f"PhU {phu.phu_id}: dmi {phu.dmi!r} does not spell {phu.naming!r}")
            continue
        try:
            expected = sampa_for(phu.dmi, phu.accent_pos)
        except (TranscriptionError, ConversionError) as exc:
            out.append(f"PhU {phu.phu_id}: {exc}")
            continue
        if phu.sampa != expected:
            out.append(f"PhU {phu.phu_id}: sampa {phu.sampa!r} but dmi gives {expected!r}")
    for v in db.phuvs.values():
        parent = db.phus.get(v.phu_id)
        if parent is None:
            out.append(f"PhUV {v.phuv_id}: unknown parent PhU {v.phu_id}")
        elif (parent.dmi, parent.accent_pos) == (v.dmi, v.accent_pos):
            out.append(f"PhUV {v.phuv_id}: same transcription as its parent {v.phu_id}")
    for mu in db.mus.values():
        if mu.ginp_id not in db.ginps:
            out.append(f"MU {mu.mu_id}: unknown Ginp {mu.ginp_id}")
        original = db.mus.get(mu.homograph_of) if mu.homograph_of else None
        if original is not None and original.ginp_id != mu.ginp_id:
            out.append(f"MU {mu.mu_id}: duplicate of {original.mu_id} with a different Ginp")
    seen = Counter((c.phu_id, c.mu_id, c.morph_feat) for c in db.corr_phu_mu)
    for c in db.corr_phu_mu:
        _dangling(out, "CorrPhuMu", c.phu_id, c.mu_id, ("PhU", db.phus), ("MU", db.mus))
    for key, n in seen.items():
        if n > 1:
            out.append(f"CorrPhuMu {key[0]}->{key[1]} ({key[2]}) appears {n} times")
    per_synu = defaultdict(int)
    for c in db.corr_mu_synu:
        per_synu[c.synu_id] += 1
        _dangling(out, "CorrMuSynu", c.mu_id, c.synu_id, ("MU", db.mus), ("SynU", db.synus))
    for synu in db.synus:
        if per_synu.get(synu, 0) != 1:
            out.append(f"SynU {synu}: linked to {per_synu.get(synu, 0)} MUs, expected exactly 1")
    for c in db.corr_synu_semu:
        _dangling(out, "CorrSynuSemu", c.synu_id, c.semu_id, ("SynU", db.synus), ("SemU", db.semus))
    return out


def require_integrity(db: LexDb) -> LexDb:
    problems = integrity_check(db)
    if problems:
        raise IntegrityError("\n".join(problems))
    return db


# -----------------------------------------------------------------------------
# Lookup


@dataclass(frozen=True)
class EntryGraph:
    phus: tuple = ()
    phuvs: tuple = ()
    mus: tuple = ()
    ginps: tuple = ()
    synus: tuple = ()
    semus: tuple = ()
    corr_phu_mu: tuple = ()
    corr_mu_synu: tuple = ()
    corr_synu_semu: tuple = ()

    def __bool__(self):
        return bool(self.phus or self.mus)

    def pronunciation_paths(self) -> dict:
        """For each SemU id, the PhU ids reachable via SynU -> MU -> PhU."""
        mu_of = defaultdict(set)
        for c in self.corr_mu_synu:
            mu_of[c.synu_id].add(c.mu_id)
        phus_of = defaultdict(set)
        for c in self.corr_phu_mu:
            phus_of[c.mu_id].add(c.phu_id)
        paths = {}
        for semu in self.semus:
            reached = set()
            for c in self.corr_synu_semu:
                if c.semu_id == semu.semu_id:
                    for mu in mu_of[c.synu_id]:
                        reached |= phus_of[mu]
            paths[semu.semu_id] = frozenset(reached)
        return paths


def lookup(db: LexDb, form: str) -> EntryGraph:
    """Everything linked to ``form`` read as a word-form and as a lemma."""
    key = form.lower()
    seed_phus = {p.phu_id for p in db.phus.values() if p.naming.lower() == key}
    seed_mus = {m.mu_id for m in db.mus.values() if m.naming.lower() == key}
    phus = set(seed_phus)
    mus = set(seed_mus)
    for c in db.corr_phu_mu:
        if c.phu_id in seed_phus:
            mus.add(c.mu_id)
        if c.mu_id in seed_mus:
            phus.add(c.phu_id)
    return _subgraph(db, phus, mus)


def _subgraph(db, phus, mus) -> EntryGraph:
    synus = {c.synu_id for c in db.corr_mu_synu if c.mu_id in mus}
    semus = {c.semu_id for c in db.corr_synu_semu if c.synu_id in synus}
    ginps = {db.mus[m].ginp_id for m in mus if db.mus[m].ginp_id in db.ginps}

    def rows(table, ids):
        return tuple(table[i] for i in sorted(ids))

    return EntryGraph(
        phus=rows(db.phus, phus),
        phuvs=tuple(sorted(v for v in db.phuvs.values() if v.phu_id in phus)),
        mus=rows(db.mus, mus),
        ginps=rows(db.ginps, ginps),
        synus=rows(db.synus, synus),
        semus=rows(db.semus, semus),
        corr_phu_mu=tuple(sorted(c for c in set(db.corr_phu_mu) if c.phu_id in phus and c.mu_id in mus)),
        corr_mu_synu=tuple(sorted(c for c in set(db.corr_mu_synu) if c.mu_id in mus)),
        corr_synu_semu=tuple(sorted(c for c in set(db.corr_synu_semu) if c.synu_id in synus)),
    )


def select(db: LexDb, selector=None):
    """Resolve an export selector to (PhU ids, MU ids).

    ``None`` selects everything; a PhU id selects that entry; an MU id
    selects the unit with its PhUs; any other string selects the PhUs
    spelled that way (or, failing that, the MUs whose lemma it is).
    """
    if selector is None:
        return set(db.phus), set(db.mus)
    if selector in db.phus:
        phus = {selector}
    elif selector in db.mus:
        phus = set(db.phus_of_mu(selector))
        return phus, {selector} | {m for p in phus for m in db.mus_of_phu(p)}
    else:
        key = selector.lower()
        phus = {p.phu_id for p in db.phus.values() if p.naming.lower() == key}
        if not phus:
            lemma_mus = {m.mu_id for m in db.mus.values() if m.naming.lower() == key}
            phus = {c.phu_id for c in db.corr_phu_mu if c.mu_id in lemma_mus}
            return phus, lemma_mus | {c.mu_id for c in db.corr_phu_mu if c.phu_id in phus}
    mus = {c.mu_id for c in db.corr_phu_mu if c.phu_id in phus}
    return phus, mus


def subset(db: LexDb, selector=None) -> LexDb:
    """The self-contained fragment of ``db`` an export of ``selector`` carries.

    Without a selector this is the whole database, unreferenced Ginps and
    SemUs included.
    """
    if selector is None:
        return db.copy().sort_links()
    phus, mus = select(db, selector)
    g = _subgraph(db, phus, mus)
    return LexDb(
        phus={p.phu_id: p for p in g.phus},
        phuvs={v.phuv_id: v for v in g.phuvs},
        mus={m.mu_id: m for m in g.mus},
        ginps={gp.ginp_id: gp for gp in g.ginps},
        synus={s.synu_id: s for s in g.synus},
        semus={s.semu_id: s for s in g.semus},
        corr_phu_mu=list(g.corr_phu_mu),
        corr_mu_synu=list(g.corr_mu_synu),
        corr_synu_semu=list(g.corr_synu_semu),
    )


# -----------------------------------------------------------------------------
# Statistics


def stats(db: LexDb) -> dict:
    """Table cardinalities, plus the row count a direct SemU-to-PhU design would need.

    In that design each semantic unit lists every inflected pronunciation of
    its lemma, so an MU's PhU rows are repeated once per SemU reaching it;
    MUs reached by no SemU keep their rows once.
    """
    corr = sorted(set(db.corr_phu_mu))
    rows_of_mu = Counter(c.mu_id for c in corr)
    semus_of_mu = defaultdict(set)
    mu_of = defaultdict(set)
    for c in db.corr_mu_synu:
        mu_of[c.synu_id].add(c.mu_id)
    for c in db.corr_synu_semu:
        for mu in mu_of[c.synu_id]:
            semus_of_mu[mu].add(c.semu_id)
    flat = sum(n * max(1, len(semus_of_mu[mu])) for mu, n in rows_of_mu.items())
    increase = 100.0 * (flat - len(corr)) / len(corr) if corr else 0.0
    return {
        "phu": len(db.phus),
        "phuv": len(db.phuvs),
        "mu": len(db.mus),
        "ginp": len(db.ginps),
        "synu": len(db.synus),
        "semu": len(db.semus),
        "corr_phu_mu": len(corr),
        "corr_mu_synu": len(set(db.corr_mu_synu)),
        "corr_synu_semu": len(set(db.corr_synu_semu)),
        "flat_projection": {"corr_semu_phu": flat, "increase_pct": round(increase, 2)},
    }


__all__ = [
    "CorrMuSynu", "CorrPhuMu", "CorrSynuSemu", "EntryGraph", "LexDb", "MU", "PhU", "PhUV",
    "SemU", "SynU", "integrity_check", "lookup", "require_integrity", "select", "stats", "subset",
]
