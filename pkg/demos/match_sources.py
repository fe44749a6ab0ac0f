"""Normalize both lexicons and join them on the (lemma, word-form, tag) window."""

from _paths import FIXTURES

from unilex import formats
from unilex.inflection import expand_lexicon
from unilex.matching import render_report
from unilex.normalization import parse_normalization_config
from unilex.pipeline import match_sources

mus, ginps = formats.parse_parole_lexicon((FIXTURES / "parole.xml").read_bytes())
dmi = formats.parse_dmi((FIXTURES / "dmi.txt").read_bytes())
mapping = formats.parse_tag_mapping((FIXTURES / "tag_mapping.tsv").read_bytes())
config = parse_normalization_config((FIXTURES / "normalization.cfg").read_bytes())

ul, report = match_sources(dmi, expand_lexicon(mus, ginps), mapping, config)
print(render_report(report))

print("first unified records:")
print(formats.write_unified(ul[:4]).decode("utf-8"))
