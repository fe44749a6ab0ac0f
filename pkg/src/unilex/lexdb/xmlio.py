"""XML export and import of database entries, governed by the shipped DTD."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from lxml import etree

from ..errors import FormatError
from ..formats import read_text
from ..inflection import Ginp, InflectionRule
from ..records import SemU, SynU
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
    subset,
)

DTD_NAME = "clips_phono.dtd"


@lru_cache(maxsize=None)
def shipped_dtd() -> etree.DTD:
    with resources.files("unilex.data").joinpath(DTD_NAME).open("rb") as fh:
        return etree.DTD(fh)


def validate(doc) -> list:
    """DTD violations of ``doc`` (bytes, str or an lxml tree) as messages."""
    if isinstance(doc, (bytes, str)):
        doc = _parse(doc)
    dtd = shipped_dtd()
    if dtd.validate(doc):
        return []
    return [f"line {e.line}: {e.message}" for e in dtd.error_log.filter_from_errors()]


def _set(el, **attrs):
    for key, value in attrs.items():
        if value is not None and value != "":
            el.set(key, str(value))
    return el


def export_xml(db: LexDb, selector=None, *, lexiconname="CLIPS", language="Italian",
               integrity="WITHOUTB") -> bytes:
    """Serialize the entry selected by ``selector`` down to the semantic layer.

    ``selector`` is a PhU id, an MU id or an orthographic form; ``None``
    exports the whole database.  The result carries a DOCTYPE and is
    checked against the shipped DTD before being returned.
    """
    part = subset(db, selector)
    root = _set(etree.Element("Parole"), lexiconname=lexiconname, language=language, integrity=integrity)

    phono = etree.SubElement(root, "ClipsPhono")
    for phu in sorted(part.phus.values()):
        el = _set(etree.SubElement(phono, "PhU"), id=phu.phu_id, naming=phu.naming, dmi=phu.dmi,
                  sampa=phu.sampa, accent=phu.accent_pos)
        for c in part.corr_phu_mu:
            if c.phu_id == phu.phu_id:
                _set(etree.SubElement(el, "CorrespMuPhu"), targetMu=c.mu_id, gramcat=c.gramcat,
                     morph_feat=c.morph_feat)
        for v in sorted(part.phuvs.values()):
            if v.phu_id == phu.phu_id:
                _set(etree.SubElement(el, "PhUV"), id=v.phuv_id, dmi=v.dmi, sampa=v.sampa, accent=v.accent_pos)

    morpho = etree.SubElement(root, "ParoleMorpho")
    for mu in sorted(part.mus.values()):
        synus = " ".join(c.synu_id for c in part.corr_mu_synu if c.mu_id == mu.mu_id)
        _set(etree.SubElement(morpho, "Mus"), id=mu.mu_id, naming=mu.naming, gramcat=gramcat_name(mu.gramcat),
             synulist=synus, gramsubcat=mu.gramsubcat, autonomy=mu.autonomy, ginp=mu.ginp_id,
             homographof=mu.homograph_of)
    for ginp_id in sorted(part.ginps):
        g = part.ginps[ginp_id]
        el = _set(etree.SubElement(morpho, "GinP"), id=g.ginp_id, gramcat=g.gramcat,
                  optional=" ".join(sorted(g.optional_tags)))
        for rule in g.rules:
            etree.SubElement(el, "Rule", remove=rule.remove, add=rule.add, tag=rule.tag)

    syntax = etree.SubElement(root, "ParoleSyntaxe")
    for synu in sorted(part.synus.values(), key=lambda s: s.synu_id):
        el = _set(etree.SubElement(syntax, "SynU"), id=synu.synu_id, example=synu.example, naming=synu.naming)
        for c in part.corr_synu_semu:
            if c.synu_id == synu.synu_id:
                etree.SubElement(el, "CorrespSynUsemU", targetsemu=c.semu_id)

    sem = etree.SubElement(root, "ParoleSemant")
    for semu in sorted(part.semus.values(), key=lambda s: s.semu_id):
        _set(etree.SubElement(sem, "SemU"), id=semu.semu_id, naming=semu.naming, example=semu.example,
             freedefinition=semu.freedefinition, weightvalsemfeaturel=semu.semfeature)

    tree = etree.ElementTree(root)
    problems = validate(tree)
    if problems:
        raise FormatError([(0, p) for p in problems], "export")
    return etree.tostring(tree, pretty_print=True, xml_declaration=True, encoding="UTF-8",
                          doctype=f'<!DOCTYPE Parole SYSTEM "{DTD_NAME}">')


def _parse(source):
    text = read_text(source)
    parser = etree.XMLParser(resolve_entities=False, no_network=True, load_dtd=False, remove_comments=True)
    try:
        return etree.ElementTree(etree.fromstring(text.encode("utf-8"), parser))
    except etree.XMLSyntaxError as exc:
        raise FormatError([(exc.lineno or 0, exc.msg)], "xml") from None


def import_xml(source) -> LexDb:
    """Load a document produced by :func:`export_xml`; DTD errors abort before loading."""
    tree = _parse(source)
    problems = validate(tree)
    if problems:
        raise FormatError([(0, p) for p in problems], "import")
    root = tree.getroot()
    db = LexDb()
    for el in root.iterfind("ClipsPhono/PhU"):
        phu_id = el.get("id")
        db.phus[phu_id] = PhU(phu_id, el.get("naming"), el.get("dmi"), int(el.get("accent", 0)), el.get("sampa"))
        for c in el.iterfind("CorrespMuPhu"):
            db.corr_phu_mu.append(CorrPhuMu(phu_id, c.get("targetMu"), c.get("gramcat"), c.get("morph_feat", "")))
        for v in el.iterfind("PhUV"):
            db.phuvs[v.get("id")] = PhUV(v.get("id"), phu_id, v.get("dmi"), int(v.get("accent", 0)), v.get("sampa"))
    for el in root.iterfind("ParoleMorpho/Mus"):
        mu_id = el.get("id")
        db.mus[mu_id] = MU(mu_id, el.get("naming"), gramcat_code(el.get("gramcat")), el.get("ginp", ""),
                           el.get("gramsubcat", ""), el.get("autonomy", ""), el.get("homographof", ""))
        db.corr_mu_synu.extend(CorrMuSynu(mu_id, s) for s in el.get("synulist", "").split())
    for el in root.iterfind("ParoleMorpho/GinP"):
        rules = [InflectionRule(r.get("remove"), r.get("add"), r.get("tag")) for r in el.iterfind("Rule")]
        try:
            g = Ginp(el.get("id"), el.get("gramcat", ""), rules, el.get("optional", "").split())
        except ValueError as exc:
            raise FormatError([(el.sourceline or 0, str(exc))], "import") from None
        db.ginps[g.ginp_id] = g
    for el in root.iterfind("ParoleSyntaxe/SynU"):
        synu_id = el.get("id")
        db.synus[synu_id] = SynU(synu_id, el.get("naming"), el.get("example", ""))
        db.corr_synu_semu.extend(CorrSynuSemu(synu_id, c.get("targetsemu")) for c in el.iterfind("CorrespSynUsemU"))
    for el in root.iterfind("ParoleSemant/SemU"):
        db.semus[el.get("id")] = SemU(el.get("id"), el.get("naming"), el.get("example", ""),
                                      el.get("freedefinition", ""), el.get("weightvalsemfeaturel", ""))
    return db.sort_links()
