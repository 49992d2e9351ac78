# tests/conftest.py
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from poly import parse_poly, poly_ring

ROOT = Path(__file__).parent.parent
INSTANCES = ROOT / 'instances'


@pytest.fixture
def R1():
    return poly_ring(1)


@pytest.fixture
def R2():
    return poly_ring(2)


@pytest.fixture
def R3():
    return poly_ring(3)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def P():
    """P("z^2 - w") parses in two variables; P(text, n) in n."""
    def parse(text, nvars=2):
        return parse_poly(text, nvars)
    return parse


@pytest.fixture
def ideal():
    """ideal("z^2, w^2") -> list of generators in two variables."""
    def parse(text, nvars=2):
        return [parse_poly(g, nvars) for g in text.split(',')]
    return parse
