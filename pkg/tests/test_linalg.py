import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quiverrep import linalg
from quiverrep.backends import _rref_numpy, rref
from quiverrep.linalg import (
    Mat,
    Subspace,
    kernel,
    kernel_basis,
    matmul,
    rank,
    row_reduce,
    row_space,
    solve,
    solve_linear,
    subspace_algebra,
)

PRIMES = (2, 3, 5)


def matrices(p, max_side=6):
    side = st.integers(min_value=0, max_value=max_side)
    return st.tuples(side, side).flatmap(
        lambda rc: st.lists(
            st.lists(st.integers(0, p - 1), min_size=rc[1], max_size=rc[1]),
            min_size=rc[0], max_size=rc[0],
        ).map(lambda rows: np.array(rows, dtype=np.int64).reshape(rc[0], rc[1]))
    )


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_rref_is_idempotent_and_pivots_are_unit_columns(pm):
    p, a = pm
    r, piv = rref(a, p)
    r2, piv2 = rref(r, p)
    assert np.array_equal(r, r2)
    assert list(piv) == list(piv2)
    for i, col in enumerate(piv):
        expected = np.zeros(r.shape[0], dtype=np.int64)
        expected[i] = 1
        assert np.array_equal(r[:, col], expected)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_backends_agree(pm):
    p, a = pm
    r1, piv1 = rref(a, p)
    r2, piv2 = _rref_numpy(a, p)
    assert np.array_equal(r1, r2)
    assert list(piv1) == list(piv2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_kernel_annihilates_and_has_complementary_dimension(pm):
    p, a = pm
    k = kernel(a, p)
    assert k.shape[1] == a.shape[1]
    if k.size:
        assert not matmul(a, k.T, p).any()
    assert k.shape[0] == a.shape[1] - rank(a, p)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(
    lambda p: st.tuples(st.just(p), matrices(p), st.data())))
def test_solve_round_trip(pmd):
    p, a, data = pmd
    x = np.array(data.draw(st.lists(st.integers(0, p - 1),
                                    min_size=a.shape[1], max_size=a.shape[1])),
                 dtype=np.int64)
    b = matmul(a, x, p)
    sol = solve(a, b, p)
    assert sol is not None
    assert np.array_equal(matmul(a, sol, p), b)


def test_solve_reports_inconsistency():
    a = np.array([[1, 0], [0, 0]], dtype=np.int64)
    assert solve(a, np.array([0, 1], dtype=np.int64), 2) is None


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(
    lambda p: st.tuples(st.just(p), matrices(p, 5), matrices(p, 5))))
def test_subspace_dimension_formula(pmm):
    p, a, b = pmm
    n = max(a.shape[1], b.shape[1])
    u = Subspace.from_vectors(a, a.shape[1], p) if a.size else Subspace.zero(a.shape[1], p)
    if a.shape[1] != b.shape[1]:
        return
    w = Subspace.from_vectors(b, n, p) if b.size else Subspace.zero(n, p)
    alg = subspace_algebra(u, w)
    assert alg.sum.dim + alg.intersection.dim == u.dim + w.dim
    assert alg.sum.contains(u) and alg.sum.contains(w)
    assert u.contains(alg.intersection) and w.contains(alg.intersection)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(p, 5))))
def test_quotient_map_kills_exactly_the_subspace(pm):
    p, a = pm
    n = a.shape[1]
    s = Subspace.from_vectors(a, n, p) if a.size else Subspace.zero(n, p)
    qm = s.quotient_map()
    assert qm.shape == (n - s.dim, n)
    for row in s.basis:
        assert not matmul(qm, row, p).any()
    assert rank(qm, p) == n - s.dim


def test_subspace_coords_round_trip():
    s = Subspace.from_vectors([[1, 1, 0], [0, 0, 1]], 3, 2)
    v = np.array([1, 1, 1], dtype=np.int64)
    c = s.coords(v)
    assert np.array_equal(matmul(c, s.basis, 2), v)
    with pytest.raises(ValueError):
        s.coords(np.array([1, 0, 0], dtype=np.int64))


def test_subspace_equality_is_canonical():
    a = Subspace.from_vectors([[1, 1], [1, 0]], 2, 2)
    b = Subspace.from_vectors([[0, 1], [1, 1]], 2, 2)
    assert a == b and hash(a) == hash(b)


def test_mat_contract_surface():
    m = Mat.from_rows([[1, 2], [2, 4]], 5)
    r, piv = row_reduce(m)
    assert piv == [0]
    assert solve_linear(m, np.array([1, 2], dtype=np.int64)) is not None
    ker = kernel_basis(m)
    assert ker.dim == 1
    with pytest.raises(ValueError):
        Mat(7, np.zeros((1, 1), dtype=np.int64))
    with pytest.raises(ValueError):
        Mat(5, np.array([[5]], dtype=np.int64))


def test_row_space_drops_zero_rows():
    a = np.array([[0, 0], [1, 1]], dtype=np.int64)
    assert row_space(a, 3).shape == (1, 2)


def test_zero_shapes_are_legal():
    assert rank(np.zeros((0, 4), dtype=np.int64), 2) == 0
    assert kernel(np.zeros((0, 3), dtype=np.int64), 2).shape == (3, 3)
    assert Subspace.zero(0, 2).dim == 0
