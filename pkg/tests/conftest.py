"""Pytest configuration and fixtures."""

import tempfile
from pathlib import Path

import pytest

from aggreason.connectives.registry import get_registry
from aggreason.fuzzysets import DiscreteFuzzySet, FiniteUniverse
from aggreason.numerics import grid_points

PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def problems_dir():
    """Directory of the shipped problem files."""
    return PROBLEMS_DIR


@pytest.fixture
def registry():
    return get_registry()


@pytest.fixture
def grid11():
    return grid_points(11)


@pytest.fixture
def grid21():
    return grid_points(21)


@pytest.fixture
def grid101():
    return grid_points(101)


@pytest.fixture
def universes():
    """Five-point input and output universes."""
    u = FiniteUniverse("U", ("x1", "x2", "x3", "x4", "x5"))
    v = FiniteUniverse("V", ("y1", "y2", "y3", "y4", "y5"))
    return u, v


@pytest.fixture
def shifted_rule(universes):
    """Rule D -> B and an input D' shifted to the right of D."""
    u, v = universes
    d = DiscreteFuzzySet(u, {"x1": 1.0, "x2": 0.2, "x3": 0.5}, "D")
    b = DiscreteFuzzySet(v, {"y4": 0.5, "y5": 1.0}, "B")
    d_prime = DiscreteFuzzySet(u, {"x2": 0.5, "x3": 1.0, "x4": 0.2}, "D'")
    return d, b, d_prime


@pytest.fixture
def write_problem(temp_dir):
    """Write a problem dict as JSON and return its path."""
    import json

    def _write(data, name="problem.json"):
        path = temp_dir / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write
