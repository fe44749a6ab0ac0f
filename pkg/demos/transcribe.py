"""Annotated orthography to SAMPA and back.

The digit after e/o picks close (1) or open (2) quality; after s/z it picks
voiceless (1) or voiced (2). The accent position counts letters only.
"""

from unilex.phonology import canonicalize, dmi_to_sampa, sampa_to_dmi, strip_digits, validate_dmi

WORDS = [
    ("pe1sca", 2, "fishing"),
    ("pe2sca", 2, "peach"),
    ("raz1za", 2, "breed"),
    ("raz2za", 2, "ray (fish)"),
    ("città", 5, "city"),
    ("chie2s2a", 4, "church"),
    ("parliamo", 6, "we speak"),
]

for annotated, accent, gloss in WORDS:
    sampa = dmi_to_sampa(annotated, accent)
    back = sampa_to_dmi(sampa, strip_digits(annotated))
    print(f"{annotated:<10} {accent}  {str(sampa):<12} -> {back.annotated:<10} {back.accent_pos}  {gloss}")

# an annotation that spells out a default reading collapses to its canonical form
redundant = validate_dmi("cas1a", 2)
print(f"\n{redundant.annotated} is canonically {canonicalize(redundant).annotated}")

diagnostics = []
dmi_to_sampa("pesca", 2, diagnostics=diagnostics)
print("unannotated pesca:", "; ".join(diagnostics))
