"""Export one entry as XML, store the database and compare layouts."""

import tempfile
from pathlib import Path

from _paths import FIXTURES

from unilex.cli import render_stats
from unilex.lexdb import export_xml, load_db, save_db, stats
from unilex.pipeline import PipelineConfig, run_pipeline

result = run_pipeline(PipelineConfig(
    dmi=FIXTURES / "dmi.txt",
    parole=FIXTURES / "parole.xml",
    tag_mapping=FIXTURES / "tag_mapping.tsv",
    edits=FIXTURES / "edits.tsv",
    normalization=FIXTURES / "normalization.cfg",
    layers=FIXTURES / "layers.xml",
))

print(export_xml(result.db, "PHUpesca").decode("utf-8"))

with tempfile.TemporaryDirectory() as tmp:
    save_db(result.db, Path(tmp) / "db")
    assert load_db(Path(tmp) / "db") == result.db
    print("tables:", ", ".join(sorted(p.name for p in (Path(tmp) / "db").iterdir())))

# linking SemUs straight to PhUs would need more rows than the layered design
print(render_stats(stats(result.db)))
