# testing_stuff/conftest.py

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parent.parent))

from cli.system_file import load_system_file  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / 'cli' / 'fixtures'


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def fig1():
    return load_system_file(FIXTURES / 'fig1.json')


@pytest.fixture
def fig1_gstar():
    return load_system_file(FIXTURES / 'fig1_gstar.json')


@pytest.fixture
def brain():
    return load_system_file(FIXTURES / 'brain.json')


@pytest.fixture
def single():
    return load_system_file(FIXTURES / 'single.json')


@pytest.fixture
def identity_complete():
    return load_system_file(FIXTURES / 'identity_complete.json')


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)
