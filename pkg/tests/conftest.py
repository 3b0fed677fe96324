import random
from pathlib import Path

import pytest

from finitree.config import get_config

# the property campaigns would otherwise write every debug line to the log file
get_config()["global"]["log_level"] = "WARNING"

from finitree.analyzer.parser import parse_program  # noqa: E402
from finitree.boolfun import BddManager  # noqa: E402
from finitree.terms import VariableRegistry  # noqa: E402

PROGRAMS = Path(__file__).parent / "programs"


@pytest.fixture
def registry():
    return VariableRegistry()


@pytest.fixture
def rng():
    return random.Random(1312)


@pytest.fixture
def manager():
    return BddManager()


@pytest.fixture
def program_path():
    def path(name):
        return PROGRAMS / name
    return path


@pytest.fixture
def load_program(registry):
    def load(name):
        return parse_program((PROGRAMS / name).read_text(encoding="utf-8"), registry)
    return load
