import sys
from pathlib import Path

import pytest

# Make the repository root importable like main.py does for src/
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.polycore import Field, make_ring, make_system, parse_polynomial  # noqa: E402


def build_system(names, polys, field=None, at_infinity=True):
    """PolySystem from variable names and polynomial strings."""
    field = field or Field.rational()
    ring = make_ring(names, field)
    parsed = [parse_polynomial(text, ring, field) for text in polys]
    return make_system(ring, parsed, field, at_infinity)


@pytest.fixture
def system():
    return build_system


@pytest.fixture
def rational():
    return Field.rational()


@pytest.fixture
def approx():
    return Field.approx(1e-8)
