"""Materialize the database from the Unified Lexicon and split homograph MUs."""

from __future__ import annotations

import dataclasses
import logging
import re
from collections import defaultdict

from ..errors import IntegrityError
from ..matching import mark_resolved
from ..records import split_tag
from .model import (
    MU,
    CorrMuSynu,
    CorrPhuMu,
    CorrSynuSemu,
    LexDb,
    PhU,
    PhUV,
    gramcat_code,
    gramcat_name,
    next_id,
    require_integrity,
    sampa_for,
)

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class MuSplit:
    original: str
    new_mu: str
    synus: tuple
    phus: tuple


def _mu_ids(ul, mu_decls):
    """Map each (lemma, gramcat, ginp) of the UL to an MU id."""
    declared = {}
    for d in mu_decls or ():
        declared.setdefault((d.lemma, gramcat_code(d.gramcat), d.ginp_id), d.mu_id)
    ids, taken = {}, set()
    for rec in ul:
        key = (rec.lemma, split_tag(rec.tag)[0], rec.ginp_id)
        if key in ids:
            continue
        mu_id = declared.get(key)
        if mu_id is None or mu_id in taken:
            mu_id = next_id(f"MUS{rec.lemma}{gramcat_name(key[1])}", taken)
        ids[key] = mu_id
        taken.add(mu_id)
    return ids


def build_db(ul, ginps, layers=None, mu_decls=None) -> LexDb:
    """Build the four-layer database.

    One PhU per distinct (word_form, transcription, accent); one MU per
    distinct (lemma, gramcat, ginp), named after ``mu_decls`` when given.
    A further transcription of a word-form already pronounced within the
    same MU becomes a PhUV of the first one, unless the row is scoped to a
    syntactic unit, in which case it is a PhU of its own.
    """
    db = LexDb(ginps=dict(ginps))
    mu_ids = _mu_ids(ul, mu_decls)
    phu_by_key = {}
    first_phu = {}  # (word_form, mu_id) -> PhU id

    def phu_for(rec):
        key = (rec.word_form, rec.transcription, rec.accent_pos)
        if key not in phu_by_key:
            phu_id = next_id(f"PHU{rec.word_form}", db.phus)
            db.phus[phu_id] = PhU(phu_id, rec.word_form, rec.transcription, rec.accent_pos,
                                  sampa_for(rec.transcription, rec.accent_pos))
            phu_by_key[key] = phu_id
        return phu_by_key[key]

    # plain rows first so the primary reading owns the unsuffixed PhU id
    ordered = [r for r in ul if not r.synu_id] + [r for r in ul if r.synu_id]
    for rec in ordered:
        gramcat, feats = split_tag(rec.tag)
        mu_id = mu_ids[(rec.lemma, gramcat, rec.ginp_id)]
        if mu_id not in db.mus:
            if rec.ginp_id not in db.ginps:
                raise IntegrityError(f"MU {mu_id}: unknown Ginp {rec.ginp_id}")
            db.mus[mu_id] = MU(mu_id, rec.lemma, gramcat, rec.ginp_id)
        slot = (rec.word_form, mu_id)
        parent = first_phu.get(slot)
        if rec.synu_id or parent is None:
            phu_id = phu_for(rec)
            if not rec.synu_id:
                first_phu[slot] = phu_id
        else:
            phu_id = parent
            p = db.phus[parent]
            if (p.dmi, p.accent_pos) != (rec.transcription, rec.accent_pos):
                dup = [v for v in db.phuvs.values()
                       if v.phu_id == parent and (v.dmi, v.accent_pos) == (rec.transcription, rec.accent_pos)]
                if not dup:
                    phuv_id = next_id(f"PHUV{rec.word_form}", db.phuvs, start=1)
                    db.phuvs[phuv_id] = PhUV(phuv_id, parent, rec.transcription, rec.accent_pos,
                                             sampa_for(rec.transcription, rec.accent_pos))
        db.corr_phu_mu.append(CorrPhuMu(phu_id, mu_id, gramcat, feats))

    if layers is not None:
        _load_layers(db, layers)
    db.sort_links()
    return require_integrity(db)


def _load_layers(db, layers):
    db.synus.update({s.synu_id: s for s in layers.synus})
    db.semus.update({s.semu_id: s for s in layers.semus})
    db.corr_synu_semu.extend(CorrSynuSemu(a, b) for a, b in layers.synu_semu)
    for ref in layers.synu_mu:
        gramcat = gramcat_code(ref.gramcat)
        hits = [
            m.mu_id for m in db.mus.values()
            if m.naming == ref.lemma and m.gramcat == gramcat
            and (ref.ginp_id is None or m.ginp_id == ref.ginp_id)
        ]
        if len(hits) != 1:
            what = "no" if not hits else "several"
            raise IntegrityError(
                f"SynU {ref.synu_id}: {what} MU for {ref.lemma}/{ref.gramcat}"
                + (f"/{ref.ginp_id}" if ref.ginp_id else "")
            )
        db.corr_mu_synu.append(CorrMuSynu(hits[0], ref.synu_id))


# -----------------------------------------------------------------------------
# Homograph duplication


def _scoped_phus(db, directives):
    """synu_id -> PhU ids carrying that unit's own pronunciation."""
    index = {(p.naming, p.dmi, p.accent_pos): p.phu_id for p in db.phus.values()}
    out = defaultdict(set)
    for d in directives:
        if d.kind != "set-transcription" or not d.synu_id:
            continue
        if d.synu_id not in db.synus:
            raise IntegrityError(f"{d.describe()}: unknown SynU {d.synu_id}")
        phu = index.get((d.word_form, d.transcription, d.accent_pos))
        if phu is None:
            raise IntegrityError(f"{d.describe()}: no PhU carries {d.transcription}; was the edit applied?")
        out[d.synu_id].add(phu)
    return out


def duplicate_homograph_mus(db: LexDb, directives, conflicts=()):
    """Split MUs whose syntactic units need different pronunciations.

    The SynUs of an MU are grouped by the PhUs their sense-scoped edits
    name; SynUs without such edits form the default group, which keeps the
    original MU.  Every other group gets a new MU sharing the Ginp, linked
    to its own PhUs plus the plain PhUs of any form the group does not
    re-pronounce, so each MU still carries the whole paradigm.

    Returns ``(db, splits, unresolved)`` where ``unresolved`` lists the
    homograph conflicts no scoped edit covers.
    """
    scoped = _scoped_phus(db, directives)
    all_scoped = set().union(*scoped.values()) if scoped else set()
    out = db.copy()
    splits = []
    taken = set(out.mus)
    for mu_id in sorted(db.mus):
        synus = db.synus_of_mu(mu_id)
        groups = defaultdict(list)
        for s in synus:
            groups[frozenset(scoped.get(s, ()))].append(s)
        if len(groups) < 2:
            continue
        rows = [c for c in db.corr_phu_mu if c.mu_id == mu_id]
        plain = [c for c in rows if c.phu_id not in all_scoped]
        keys = sorted(groups, key=lambda k: (len(k) > 0, sorted(k)))
        mu = db.mus[mu_id]
        base = re.sub(r"\d+$", "", mu_id)
        out.corr_phu_mu = [c for c in out.corr_phu_mu if c.mu_id != mu_id]
        for n, key in enumerate(keys):
            own = [c for c in rows if c.phu_id in key]
            covered = {c.morph_feat for c in own}
            target = mu_id if n == 0 else next_id(base, taken | {base})
            group_rows = own + [c for c in plain if c.morph_feat not in covered]
            out.corr_phu_mu.extend(dataclasses.replace(c, mu_id=target) for c in group_rows)
            if n == 0:
                continue
            taken.add(target)
            out.mus[target] = dataclasses.replace(mu, mu_id=target, homograph_of=mu_id)
            moved = set(groups[key])
            out.corr_mu_synu = [
                CorrMuSynu(target, c.synu_id) if c.mu_id == mu_id and c.synu_id in moved else c
                for c in out.corr_mu_synu
            ]
            split = MuSplit(mu_id, target, tuple(sorted(moved)), tuple(sorted(key)))
            logger.info("split homograph MU %s -> %s for %s", mu_id, target, ", ".join(split.synus))
            splits.append(split)
    out.sort_links()
    require_integrity(out)
    unresolved = [c for c in mark_resolved(conflicts, directives) if not c.resolved_by_edit]
    for c in unresolved:
        logger.warning("unresolved homograph %s/%s/%s: %s", *c.window, ", ".join(t for t, _ in c.candidates))
    return out, splits, unresolved
