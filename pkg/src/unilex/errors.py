"""Exception hierarchy shared by every unilex module."""


class LexiconError(Exception):
    """Base class for all unilex errors."""


class FormatError(LexiconError):
    """A malformed line or element in one of the on-disk formats.

    ``errors`` holds every positioned problem found, as ``(line, message)``
    pairs; ``line`` is 1-based, or 0 when no line applies.
    """

    def __init__(self, errors, source=None):
        self.errors = list(errors)
        self.source = source
        where = f"{source}: " if source else ""
        lines = [f"{where}line {ln}: {msg}" if ln else f"{where}{msg}" for ln, msg in self.errors]
        super().__init__("\n".join(lines))


class FieldOverflowError(LexiconError):
    """A value does not fit its fixed-width column."""


class TranscriptionError(LexiconError):
    """An annotated-orthography transcription violates the digit convention."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at letter {position})"
        super().__init__(message)


class ConversionError(LexiconError):
    """The grapheme-to-phoneme rules cannot handle some input context."""


class AlignmentError(LexiconError):
    """SAMPA phones cannot be aligned to the given orthography."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at phone {position})"
        super().__init__(message)


class RuleApplicationError(LexiconError):
    """A remove-add rule's suffix is not present on the lemma."""


class UnresolvedGinpError(LexiconError):
    """A morphological unit points at an inflectional pattern that does not exist."""


class UnmappedTagError(LexiconError):
    """A source tag has no row in the tag mapping."""


class StaleEditError(LexiconError):
    """An edit directive's selector matches no record."""


class IntegrityError(LexiconError):
    """A lexical database row references a missing unit or breaks a table invariant."""


class StressConventionError(LexiconError):
    """A stress apostrophe appears somewhere other than the end of a word."""
