import os

import numpy as np
import pytest

from quiverrep.quiver import Quiver, Representation, standard_objects

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def a2_quiver() -> Quiver:
    return Quiver(("1", "2"), (("a", "1", "2"),))


def a3_quiver() -> Quiver:
    return Quiver(("1", "2", "3"), (("a", "1", "2"), ("b", "2", "3")))


def d4_quiver() -> Quiver:
    return Quiver(("1", "2", "3", "4"),
                  (("a", "2", "1"), ("b", "2", "3"), ("c", "2", "4")))


def kronecker_quiver() -> Quiver:
    return Quiver(("1", "2"), (("a", "1", "2"), ("b", "1", "2")))


def interval(quiver: Quiver, p: int, lo: int, hi: int) -> Representation:
    """Linear-quiver module supported on the vertex interval [lo, hi]."""
    dims = {v: 1 for v in quiver.vertices if lo <= int(v) <= hi}
    maps = {n: np.array([[1]]) for n, s, t in quiver.arrows
            if lo <= int(s) and int(t) <= hi}
    return Representation(quiver, p, dims, maps)


@pytest.fixture(scope="session")
def a2():
    return a2_quiver()


@pytest.fixture(scope="session")
def a3():
    return a3_quiver()


@pytest.fixture(scope="session")
def d4():
    return d4_quiver()


@pytest.fixture(scope="session")
def kron():
    return kronecker_quiver()


@pytest.fixture(scope="session")
def a2_objects(a2):
    """(P1, I1, S1, P2, I2, S2) over F_2; the projectives come with labels."""
    p1, i1, s1 = standard_objects(a2, 2, "1")
    p2, i2, s2 = standard_objects(a2, 2, "2")
    return p1, i1, s1, p2, i2, s2
