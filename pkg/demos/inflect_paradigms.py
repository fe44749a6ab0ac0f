"""Expand a few lemmas through their inflectional patterns.

Each pattern is an ordered list of remove-add rules; a paradigm is the lemma
pushed through every rule in turn.
"""

from _paths import FIXTURES

from unilex import formats
from unilex.errors import RuleApplicationError
from unilex.inflection import apply_rule, expand_lexicon, generate_paradigm

mus, ginps = formats.parse_parole_lexicon((FIXTURES / "parole.xml").read_bytes())

for mu in mus:
    if mu.lemma not in ("pesca", "parlare", "bello"):
        continue
    ginp = ginps[mu.ginp_id]
    print(f"{mu.mu_id} (Ginp {ginp.ginp_id}, {len(ginp.rules)} rules)")
    for word_form, tag in generate_paradigm(mu, ginp).entries:
        optional = "  (optional)" if tag in ginp.optional_tags else ""
        print(f"  {tag:<12}{word_form}{optional}")

records = expand_lexicon(mus, ginps)
print(f"\n{len(mus)} lemmas expand to {len(records)} canonical records")

# a rule whose suffix the lemma lacks is refused rather than guessed at
verb = next(g for g in ginps.values() if g.gramcat == "V")
try:
    apply_rule("casa", verb.rules[0], verb.ginp_id)
except RuleApplicationError as exc:
    print(f"refused: {exc}")
