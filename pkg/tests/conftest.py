import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from unilex import formats  # noqa: E402
from unilex.normalization import parse_normalization_config  # noqa: E402
from unilex.pipeline import PipelineConfig, run_pipeline  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name) -> Path:
    return FIXTURES / name


def pipeline_config(**overrides) -> PipelineConfig:
    kw = dict(
        dmi=FIXTURES / "dmi.txt",
        parole=FIXTURES / "parole.xml",
        tag_mapping=FIXTURES / "tag_mapping.tsv",
        edits=FIXTURES / "edits.tsv",
        normalization=FIXTURES / "normalization.cfg",
        layers=FIXTURES / "layers.xml",
    )
    kw.update(overrides)
    return PipelineConfig(**kw)


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def parole_lexicon():
    return formats.parse_parole_lexicon((FIXTURES / "parole.xml").read_bytes())


@pytest.fixture(scope="session")
def dmi_records():
    return formats.parse_dmi((FIXTURES / "dmi.txt").read_bytes())


@pytest.fixture(scope="session")
def tag_mapping():
    return formats.parse_tag_mapping((FIXTURES / "tag_mapping.tsv").read_bytes())


@pytest.fixture(scope="session")
def norm_config():
    return parse_normalization_config((FIXTURES / "normalization.cfg").read_bytes())


@pytest.fixture(scope="session")
def layers():
    return formats.parse_layer_fixtures((FIXTURES / "layers.xml").read_bytes())


@pytest.fixture(scope="session")
def edits():
    return formats.parse_edits((FIXTURES / "edits.tsv").read_bytes())


@pytest.fixture(scope="session")
def pipeline_result():
    return run_pipeline(pipeline_config())


# One line per acceptance criterion, printed after the run.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
