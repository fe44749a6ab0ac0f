"""Why a homograph lemma needs two morphological units.

pesca is both "fishing" (close e) and "peach" (open e). With one MU for both,
every sense reaches every pronunciation. The edits file pins the open reading
to the peach sense; duplication then gives that sense its own MU.
"""

from _paths import FIXTURES

from unilex import formats
from unilex.lexdb import build_db, lookup
from unilex.pipeline import PipelineConfig, run_pipeline


def show(db, title):
    print(title)
    for semu, phus in sorted(lookup(db, "pesca").pronunciation_paths().items()):
        sampa = sorted(db.phus[p].sampa for p in phus)
        print(f"  {semu:<16}{' '.join(sampa)}")


result = run_pipeline(PipelineConfig(
    dmi=FIXTURES / "dmi.txt",
    parole=FIXTURES / "parole.xml",
    tag_mapping=FIXTURES / "tag_mapping.tsv",
    edits=FIXTURES / "edits.tsv",
    normalization=FIXTURES / "normalization.cfg",
    layers=FIXTURES / "layers.xml",
))
mus, ginps = formats.parse_parole_lexicon((FIXTURES / "parole.xml").read_bytes())
layers = formats.parse_layer_fixtures((FIXTURES / "layers.xml").read_bytes())

show(build_db(result.ul, ginps, layers, mus), "one MU per lemma:")
show(result.db, "after duplication:")
for split in result.splits:
    shared = result.db.mus[split.new_mu].ginp_id
    print(f"{split.original} -> {split.new_mu} takes {', '.join(split.synus)} (Ginp {shared} shared)")
