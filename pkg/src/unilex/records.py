"""Record types passed between the pipeline stages."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional


def split_tag(tag: str):
    """``"N-FS"`` -> ``("N", "FS")``; a tag without features gives ``("B", "")``."""
    gramcat, _, feats = tag.partition("-")
    return gramcat, feats


def join_tag(gramcat: str, feats: str) -> str:
    return f"{gramcat}-{feats}" if feats else gramcat


@dataclass(frozen=True)
class DmiRecord:
    """One inflected word-form of the pronunciation lexicon."""

    lemma: str
    word_form: str
    transcription: str
    accent_pos: int
    gramcat: str
    morph_feats: str

    @property
    def tag(self) -> str:
        return join_tag(self.gramcat, self.morph_feats)


@dataclass(frozen=True)
class MorphUnitDecl:
    mu_id: str
    lemma: str
    gramcat: str
    ginp_id: str


@dataclass(frozen=True)
class CanonicalRecord:
    """A work-format row: one generated form of a morphological unit."""

    lemma: str
    word_form: str
    tag: str
    ginp_id: str


@dataclass(frozen=True)
class UnifiedRecord:
    """A matched form carrying both the inflectional code and a pronunciation.

    ``synu_id`` is empty for ordinary rows.  A row recovered for one sense of
    a homograph names the syntactic unit whose pronunciation it is.
    """

    lemma: str
    word_form: str
    tag: str
    ginp_id: str
    transcription: str
    accent_pos: int
    synu_id: str = ""

    @property
    def window(self):
        return (self.lemma, self.word_form, self.tag)


EDIT_KINDS = ("set-transcription", "suppress-form", "remap-tag")


@dataclass(frozen=True)
class EditDirective:
    kind: str
    lemma: str
    word_form: str
    tag: str
    synu_id: Optional[str] = None
    transcription: Optional[str] = None
    accent_pos: Optional[int] = None
    new_tag: Optional[str] = None
    line: int = field(default=0, compare=False)

    @property
    def window(self):
        return (self.lemma, self.word_form, self.tag)

    def describe(self) -> str:
        where = f"line {self.line}: " if self.line else ""
        synu = f" [{self.synu_id}]" if self.synu_id else ""
        return f"{where}{self.kind} {self.lemma}/{self.word_form}/{self.tag}{synu}"


@dataclass(frozen=True)
class SynU:
    synu_id: str
    naming: str
    example: str = ""


@dataclass(frozen=True)
class SemU:
    semu_id: str
    naming: str
    example: str = ""
    freedefinition: str = ""
    semfeature: str = ""


@dataclass(frozen=True)
class MuRef:
    """Points a syntactic unit at the morphological unit for ``lemma``/``gramcat``."""

    synu_id: str
    lemma: str
    gramcat: str
    ginp_id: Optional[str] = None


class LayerFixtures(NamedTuple):
    synus: list
    semus: list
    synu_semu: list  # (synu_id, semu_id)
    synu_mu: list  # MuRef
