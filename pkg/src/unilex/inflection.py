"""Inflectional patterns as ordered remove-add suffix rules."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import RuleApplicationError, UnresolvedGinpError
from .records import CanonicalRecord, MorphUnitDecl, split_tag


@dataclass(frozen=True)
class InflectionRule:
    remove: str
    add: str
    tag: str

    def __post_init__(self):
        for name in ("remove", "add"):
            value = getattr(self, name)
            if value and not value.isalpha():
                raise ValueError(f"{name} suffix {value!r} must contain letters only")
        if not self.tag:
            raise ValueError("rule needs a tag")


@dataclass(frozen=True)
class Ginp:
    """An inflectional pattern.

    ``optional_tags`` lists forms a normalization pass may drop so that both
    sources agree on paradigm size (present participles, typically).
    """

    ginp_id: str
    gramcat: str
    rules: tuple
    optional_tags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "optional_tags", frozenset(self.optional_tags))
        if not self.rules:
            raise ValueError(f"Ginp {self.ginp_id} has no rules")
        seen = set()
        for rule in self.rules:
            if rule.tag in seen:
                raise ValueError(f"Ginp {self.ginp_id} has two rules for tag {rule.tag}")
            seen.add(rule.tag)
            if split_tag(rule.tag)[0] != self.gramcat:
                raise ValueError(
                    f"Ginp {self.ginp_id} ({self.gramcat}) has rule tag {rule.tag} of another category"
                )
        unknown = self.optional_tags - seen
        if unknown:
            raise ValueError(f"Ginp {self.ginp_id} marks unknown tags optional: {sorted(unknown)}")

    @property
    def tags(self):
        return [r.tag for r in self.rules]


@dataclass(frozen=True)
class Paradigm:
    mu_id: str
    entries: tuple  # (word_form, tag)


def apply_rule(lemma: str, rule: InflectionRule, ginp_id=None) -> str:
    if rule.remove and not lemma.endswith(rule.remove):
        where = f" in Ginp {ginp_id}" if ginp_id is not None else ""
        raise RuleApplicationError(
            f"cannot remove {rule.remove!r} from {lemma!r} (rule {rule.tag}{where})"
        )
    stem = lemma[: len(lemma) - len(rule.remove)]
    return stem + rule.add


def generate_paradigm(mu: MorphUnitDecl, ginp: Ginp) -> Paradigm:
    if mu.ginp_id != ginp.ginp_id:
        raise UnresolvedGinpError(f"MU {mu.mu_id} points at Ginp {mu.ginp_id}, got {ginp.ginp_id}")
    entries = []
    for rule in ginp.rules:
        try:
            entries.append((apply_rule(mu.lemma, rule, ginp.ginp_id), rule.tag))
        except RuleApplicationError as exc:
            raise RuleApplicationError(f"MU {mu.mu_id}: {exc}") from None
    return Paradigm(mu.mu_id, tuple(entries))


def expand_lexicon(mus, ginps) -> list:
    """Every paradigm of every MU as canonical records, in MU then rule order."""
    records = []
    for mu in mus:
        try:
            ginp = ginps[mu.ginp_id]
        except KeyError:
            raise UnresolvedGinpError(f"MU {mu.mu_id} points at missing Ginp {mu.ginp_id}") from None
        for word_form, tag in generate_paradigm(mu, ginp).entries:
            records.append(CanonicalRecord(mu.lemma, word_form, tag, mu.ginp_id))
    return records
