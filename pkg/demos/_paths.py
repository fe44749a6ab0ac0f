"""Where the demos find their input: the small lexicon shipped with the tests."""

from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
