import sys
from pathlib import Path

import pytest

from degreeplan.catalog import load_catalog, parse_transcript

FIXTURES = Path(__file__).parent / "fixtures"

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def it_catalog():
    return load_catalog(FIXTURES / "it")


@pytest.fixture()
def freshman(it_catalog):
    return parse_transcript((FIXTURES / "empty_transcript.csv").read_text(), it_catalog)


@pytest.fixture()
def sophomore(it_catalog):
    return parse_transcript((FIXTURES / "sophomore_transcript.csv").read_text(), it_catalog)
