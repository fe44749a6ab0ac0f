"""Command-line driver: one subcommand per pipeline stage plus ``pipeline``.

Data goes to stdout (or ``--out``), diagnostics to stderr; any error exits
with status 1.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from . import formats
from .errors import FormatError, LexiconError
from .inflection import expand_lexicon
from .lexdb import export_xml, import_xml, integrity_check, load_db, lookup, save_db, stats
from .matching import render_report, report_from_dict
from .normalization import NormalizationConfig, parse_normalization_config
from .phonology import SampaTranscription, dmi_to_sampa, sampa_to_dmi, validate_dmi
from .pipeline import PipelineConfig, build_lexdb, match_sources, run_pipeline

logger = logging.getLogger("unilex")


class CliError(Exception):
    pass


def _read(path, parser):
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    try:
        return parser(data)
    except FormatError as exc:
        raise FormatError(exc.errors, str(path)) from None


def _emit(data, out=None):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


# -----------------------------------------------------------------------------
# Rendering


def _graph_dict(graph) -> dict:
    def rows(items):
        return [dataclasses.asdict(i) if dataclasses.is_dataclass(i) else i for i in items]

    out = {
        "phus": rows(graph.phus),
        "phuvs": rows(graph.phuvs),
        "mus": rows(graph.mus),
        "ginps": [g.ginp_id for g in graph.ginps],
        "synus": rows(graph.synus),
        "semus": rows(graph.semus),
        "corr_phu_mu": rows(graph.corr_phu_mu),
        "corr_mu_synu": rows(graph.corr_mu_synu),
        "corr_synu_semu": rows(graph.corr_synu_semu),
    }
    out["paths"] = {k: sorted(v) for k, v in sorted(graph.pronunciation_paths().items())}
    return out


def render_lookup(form, graph, fmt="text") -> str:
    if fmt == "json":
        return _json({"form": form, **_graph_dict(graph)})
    if not graph:
        return f"{form}: not found\n"
    lines = [f"{form}"]
    for p in graph.phus:
        lines.append(f"PhU {p.phu_id}  dmi={p.dmi} accent={p.accent_pos} sampa={p.sampa}")
        for c in graph.corr_phu_mu:
            if c.phu_id == p.phu_id:
                lines.append(f"  -> {c.mu_id} {c.gramcat} {c.morph_feat}")
        for v in graph.phuvs:
            if v.phu_id == p.phu_id:
                lines.append(f"  variant {v.phuv_id}  dmi={v.dmi} sampa={v.sampa}")
    for m in graph.mus:
        extra = f" (homograph of {m.homograph_of})" if m.homograph_of else ""
        synus = [c.synu_id for c in graph.corr_mu_synu if c.mu_id == m.mu_id]
        lines.append(f"MU {m.mu_id}  {m.naming} {m.gramcat} ginp={m.ginp_id}{extra}")
        if synus:
            lines.append(f"  -> {' '.join(synus)}")
    for s in graph.synus:
        semus = [c.semu_id for c in graph.corr_synu_semu if c.synu_id == s.synu_id]
        lines.append(f"SynU {s.synu_id}  {s.example}".rstrip())
        if semus:
            lines.append(f"  -> {' '.join(semus)}")
    for s in graph.semus:
        lines.append(f"SemU {s.semu_id}  {s.freedefinition}".rstrip())
    paths = graph.pronunciation_paths()
    if paths:
        lines.append("pronunciation paths:")
        sampa = {p.phu_id: p.sampa for p in graph.phus}
        for semu, phus in sorted(paths.items()):
            shown = ", ".join(f"{p} {sampa.get(p, '?')}" for p in sorted(phus)) or "-"
            lines.append(f"  {semu}: {shown}")
    return "\n".join(lines) + "\n"


def render_stats(counts, fmt="text") -> str:
    if fmt == "json":
        return _json(counts)
    flat = counts["flat_projection"]
    lines = [f"{name:<16}{counts[name]:>10}" for name in counts if name != "flat_projection"]
    lines.append(
        f"direct SemU-PhU projection: {flat['corr_semu_phu']} rows "
        f"({flat['increase_pct']:+.2f}% over corr_phu_mu)"
    )
    return "\n".join(lines) + "\n"


def render_build(splits, unresolved, stale, problems, fmt="text") -> str:
    data = {
        "splits": [{"original": s.original, "new_mu": s.new_mu, "synus": list(s.synus), "phus": list(s.phus)}
                   for s in splits],
        "unresolved": [{"lemma": c.window.lemma, "word_form": c.window.word_form, "tag": c.window.tag}
                       for c in unresolved],
        "stale_edits": [d.describe() for d in stale],
        "integrity": problems,
    }
    if fmt == "json":
        return _json(data)
    lines = [f"split {s['original']} -> {s['new_mu']} for {' '.join(s['synus'])}" for s in data["splits"]]
    lines += [f"unresolved homograph {u['lemma']}/{u['word_form']}/{u['tag']}" for u in data["unresolved"]]
    lines += [f"stale edit {d}" for d in data["stale_edits"]]
    lines.append("integrity: ok" if not problems else f"integrity: {len(problems)} violations")
    return "\n".join(lines) + "\n"


# -----------------------------------------------------------------------------
# Commands


def cmd_expand(args):
    mus, ginps = _read(args.parole, formats.parse_parole_lexicon)
    _emit(formats.write_canonical(expand_lexicon(mus, ginps)), args.out)


def _norm(path):
    return _read(path, parse_normalization_config) if path else NormalizationConfig()


def cmd_match(args):
    dmi = _read(args.dmi, formats.parse_dmi)
    canonical = _read(args.canonical, formats.parse_canonical)
    mapping = _read(args.tag_mapping, formats.parse_tag_mapping) if args.tag_mapping else None
    ul, report = match_sources(dmi, canonical, mapping, _norm(args.normalization))
    text = render_report(report, args.format)
    if args.out is None:
        _emit(formats.write_unified(ul))
        sys.stderr.write(text)
    else:
        _emit(formats.write_unified(ul), args.out)
        _emit(text, args.report)


def cmd_build(args):
    ul = _read(args.ul, formats.parse_unified)
    mus, ginps = _read(args.parole, formats.parse_parole_lexicon)
    layers = _read(args.layers, formats.parse_layer_fixtures) if args.layers else None
    directives = _read(args.edits, formats.parse_edits) if args.edits else []
    conflicts = ()
    if args.match_report:
        conflicts = _read(args.match_report, lambda b: report_from_dict(json.loads(b))).conflicts
    stale = []
    _, db, splits, unresolved = build_lexdb(
        ul, ginps, layers, directives, mu_decls=mus, conflicts=conflicts, strict=not args.lenient, stale=stale
    )
    problems = integrity_check(db)
    save_db(db, args.out)
    _emit(render_build(splits, unresolved, stale, problems, args.format))
    if problems:
        raise CliError("integrity check failed")


def cmd_lookup(args):
    db = load_db(args.db)
    _emit(render_lookup(args.form, lookup(db, args.form), args.format))


def cmd_export(args):
    _emit(export_xml(load_db(args.db), args.selector), args.out)


def cmd_import(args):
    db = _read(args.xml, import_xml)
    problems = integrity_check(db)
    if problems:
        raise CliError("imported document fails the integrity check:\n" + "\n".join(problems))
    save_db(db, args.out)


def cmd_convert(args):
    if args.from_sampa:
        result = sampa_to_dmi(SampaTranscription.parse(args.text), args.word_form)
        _emit(f"{result.annotated}\t{result.accent_pos}\n")
        return
    if args.word_form is not None and not args.word_form.isdigit():
        raise CliError(f"accent position must be a number, got {args.word_form!r}")
    accent = int(args.word_form) if args.word_form is not None else 0
    diagnostics = []
    sampa = dmi_to_sampa(validate_dmi(args.text, accent), diagnostics=diagnostics)
    for msg in diagnostics:
        sys.stderr.write(f"warning: {msg}\n")
    _emit(f"{sampa}\n")


def cmd_stats(args):
    _emit(render_stats(stats(load_db(args.db)), args.format))


def cmd_pipeline(args):
    config = PipelineConfig(
        dmi=args.dmi, parole=args.parole, tag_mapping=args.tag_mapping, edits=args.edits,
        normalization=args.normalization, layers=args.layers, out_dir=args.out, strict=not args.lenient,
    )
    result = run_pipeline(config)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / "canonical.txt").write_bytes(formats.write_canonical(result.canonical))
    (out / "unified.txt").write_bytes(formats.write_unified(result.ul))
    (out / "report.json").write_text(render_report(result.report, "json"), encoding="utf-8")
    save_db(result.db, out / "db")
    _emit(render_report(result.report, args.format))
    problems = integrity_check(result.db)
    if problems:
        raise CliError("integrity check failed:\n" + "\n".join(problems))


# -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unilex", description="Unify a pronunciation and a morphological lexicon.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("expand", help="expand the morphological lexicon into canonical records")
    sp.add_argument("parole")
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("match", help="normalize both sources and join them into the Unified Lexicon")
    sp.add_argument("--dmi", required=True)
    sp.add_argument("--canonical", required=True)
    sp.add_argument("--tag-mapping")
    sp.add_argument("--normalization")
    sp.add_argument("-o", "--out", help="Unified Lexicon file (default: stdout, report to stderr)")
    sp.add_argument("--report", help="report file (default: stdout when --out is given)")
    fmt(sp)
    sp.set_defaults(func=cmd_match)

    sp = sub.add_parser("build", help="apply edits, build the database and split homograph MUs")
    sp.add_argument("--ul", required=True)
    sp.add_argument("--parole", required=True, help="morphological lexicon supplying Ginps and MU ids")
    sp.add_argument("--layers")
    sp.add_argument("--edits")
    sp.add_argument("--match-report", help="JSON match report whose conflicts are checked for coverage")
    sp.add_argument("-o", "--out", required=True, help="database directory")
    sp.add_argument("--lenient", action="store_true", help="skip stale edits instead of failing")
    fmt(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("lookup", help="print everything linked to a word-form or lemma")
    sp.add_argument("db")
    sp.add_argument("form")
    fmt(sp)
    sp.set_defaults(func=cmd_lookup)

    sp = sub.add_parser("export", help="export an entry (or the whole database) as XML")
    sp.add_argument("db")
    sp.add_argument("selector", nargs="?", help="PhU id, MU id or form")
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("import", help="load an exported XML document into a database directory")
    sp.add_argument("xml")
    sp.add_argument("out")
    sp.set_defaults(func=cmd_import)

    sp = sub.add_parser("convert", help="annotated orthography to SAMPA, or back with --from-sampa")
    sp.add_argument("text", help="transcription (or SAMPA with --from-sampa)")
    sp.add_argument("word_form", nargs="?", help="accent position (or the word-form with --from-sampa)")
    sp.add_argument("--from-sampa", action="store_true")
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("stats", help="table counts and the direct SemU-PhU projection")
    sp.add_argument("db")
    fmt(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("pipeline", help="run every stage, materializing the intermediate files")
    sp.add_argument("--dmi", required=True)
    sp.add_argument("--parole", required=True)
    sp.add_argument("--tag-mapping")
    sp.add_argument("--normalization")
    sp.add_argument("--edits")
    sp.add_argument("--layers")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--lenient", action="store_true")
    fmt(sp)
    sp.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "convert" and args.from_sampa and args.word_form is None:
        parser.error("--from-sampa needs the word-form")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (LexiconError, CliError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"unilex {args.command}: error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
