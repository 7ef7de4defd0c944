"""Shared fixtures: small point sets and pipeline runs reused across tests."""
from __future__ import annotations

import pytest

from tensurf import PointSet, fixture, implicitize


@pytest.fixture(scope="session")
def two_points():
    return PointSet([((0, 1), (0, 1)), ((1, 0), (1, 0))])


@pytest.fixture(scope="session")
def skew4():
    """Four generic points, one per ruling line in each direction."""
    return fixture("skew4").points


@pytest.fixture(scope="session")
def diag4():
    """Four points on the diagonal: not generic."""
    return fixture("diag4").points


@pytest.fixture(scope="session")
def grid13():
    """Thirteen points on a 4 x 6 grid of ruling lines."""
    return fixture("grid13").points


@pytest.fixture(scope="session")
def r2a3_out():
    """Full pipeline on the r=2, a=3 fixture with explicit forms."""
    inst = fixture("r2_a3")
    return implicitize(inst.points, inst.a, forms=inst.forms)


@pytest.fixture(scope="session")
def r0a2_out():
    """Full pipeline on an empty point set with a=2 and a seeded subspace."""
    return implicitize(None, 2, seed=11)
