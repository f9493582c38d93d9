"""Exact dense linear algebra over a prime field F_p.

Matrices are dense int64 arrays with entries reduced into ``[0, p)``.
Subspaces are always stored by their reduced-row-echelon basis, which is
unique, so subspace equality is a byte comparison and sets of subspaces
deduplicate exactly.

The module exposes a typed contract surface (:class:`Mat`,
:class:`Subspace`, :func:`row_reduce`, :func:`solve_linear`,
:func:`kernel_basis`, :func:`subspace_algebra`) plus the raw ndarray
helpers the rest of the package uses directly.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .backends import rref

SUPPORTED_PRIMES = (2, 3, 5)


def check_prime(p: int) -> None:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"modulus {p} not supported; choose one of {SUPPORTED_PRIMES}")


def asmod(a, p: int) -> np.ndarray:
    """Coerce to an int64 array reduced mod p."""
    return np.asarray(a, dtype=np.int64) % p


# ---------------------------------------------------------------------------
# ndarray-level operations


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def solve(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Solve a@x = b over F_p; free variables are set to 0; None if inconsistent."""
    a = asmod(a, p)
    b = asmod(b, p)
    if b.shape != (a.shape[0],):
        raise ValueError(f"rhs length {b.shape} does not match {a.shape[0]} rows")
    aug = np.concatenate([a, b[:, None]], axis=1)
    r, piv = rref(aug, p)
    if len(piv) and piv[-1] == a.shape[1]:
        return None
    x = np.zeros(a.shape[1], dtype=np.int64)
    for i, col in enumerate(piv):
        x[col] = r[i, -1]
    return x


def kernel(a: np.ndarray, p: int) -> np.ndarray:
    """RREF basis (rows) of the right null space of a."""
    a = asmod(a, p)
    rows, cols = a.shape
    r, piv = rref(a, p)
    free = [j for j in range(cols) if j not in set(int(c) for c in piv)]
    if not free:
        return np.zeros((0, cols), dtype=np.int64)
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, j in enumerate(free):
        basis[k, j] = 1
        for i, col in enumerate(piv):
            basis[k, col] = (-r[i, j]) % p
    return rref(basis, p)[0][: len(free)]


def row_space(a: np.ndarray, p: int) -> np.ndarray:
    """RREF basis (rows, no zero rows) of the row span of a."""
    r, piv = rref(asmod(a, p), p)
    return r[: len(piv)]


def column_space(a: np.ndarray, p: int) -> np.ndarray:
    return row_space(asmod(a, p).T, p)


# ---------------------------------------------------------------------------
# contract types


@dataclass(frozen=True)
class Mat:
    """An exact matrix over F_p.  Zero-row/zero-column shapes are legal."""

    p: int
    a: np.ndarray

    def __post_init__(self):
        check_prime(self.p)
        arr = np.asarray(self.a, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("matrix array must be 2-dimensional")
        if np.any(arr < 0) or np.any(arr >= self.p):
            raise ValueError("matrix entries must be reduced into [0, p)")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "a", arr)

    @classmethod
    def from_rows(cls, rows, p: int) -> "Mat":
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        return cls(p, arr % p)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n, canonically represented by its RREF basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray = field(default=None)
    pivots: tuple = field(default=None)

    def __post_init__(self):
        check_prime(self.p)
        b = self.basis
        if b is None:
            b = np.zeros((0, self.ambient_dim), dtype=np.int64)
        b = np.ascontiguousarray(np.asarray(b, dtype=np.int64))
        if b.shape[1] != self.ambient_dim:
            raise ValueError("basis width does not match ambient dimension")
        r, piv = rref(b, self.p)
        r = r[: len(piv)]
        if self.pivots is None or b.shape != r.shape or not np.array_equal(b, r):
            b = r
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "pivots", tuple(int(c) for c in piv))

    @classmethod
    def from_vectors(cls, vectors, ambient_dim: int, p: int) -> "Subspace":
        arr = np.asarray(vectors, dtype=np.int64)
        if ambient_dim == 0 or arr.size == 0:
            return cls(p, ambient_dim, None)
        return cls(p, ambient_dim, arr.reshape(-1, ambient_dim) % p)

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(p, ambient_dim, None)

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def contains_vector(self, v) -> bool:
        v = asmod(v, self.p)
        if v.shape != (self.ambient_dim,):
            raise ValueError("vector length does not match ambient dimension")
        if self.dim == 0:
            return not v.any()
        c = v[list(self.pivots)]
        return np.array_equal((c @ self.basis) % self.p, v)

    def coords(self, v) -> np.ndarray:
        """Coordinates of a member vector in the RREF basis."""
        v = asmod(v, self.p)
        c = v[list(self.pivots)] if self.dim else np.zeros(0, dtype=np.int64)
        if not np.array_equal((c @ self.basis) % self.p if self.dim else np.zeros_like(v), v):
            raise ValueError("vector is not in the subspace")
        return c

    def contains(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains_vector(row) for row in other.basis)

    def add(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        return Subspace(self.p, self.ambient_dim, stacked)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        # v = a.U = b.W  <=>  (a, b) in ker [U^T | -W^T]
        stacked = np.concatenate([self.basis.T, (-other.basis.T) % self.p], axis=1)
        ab = kernel(stacked, self.p)
        vecs = (ab[:, : self.dim] @ self.basis) % self.p
        return Subspace(self.p, self.ambient_dim, vecs)

    def quotient_reps(self) -> np.ndarray:
        """Standard basis vectors whose classes span ambient/self."""
        piv = set(self.pivots)
        free = [j for j in range(self.ambient_dim) if j not in piv]
        reps = np.zeros((len(free), self.ambient_dim), dtype=np.int64)
        for k, j in enumerate(free):
            reps[k, j] = 1
        return reps

    def quotient_map(self) -> np.ndarray:
        """Matrix sending an ambient column vector to quotient coordinates.

        The quotient coordinates are taken in the classes of
        :meth:`quotient_reps`; the map has this subspace as kernel.
        """
        piv = set(self.pivots)
        free = [j for j in range(self.ambient_dim) if j not in piv]
        n = self.ambient_dim
        reduce_ = np.eye(n, dtype=np.int64)
        if self.dim:
            sel = np.zeros((self.dim, n), dtype=np.int64)
            for i, c in enumerate(self.pivots):
                sel[i, c] = 1
            reduce_ = (reduce_ - self.basis.T @ sel) % self.p
        pick = np.zeros((len(free), n), dtype=np.int64)
        for k, j in enumerate(free):
            pick[k, j] = 1
        return (pick @ reduce_) % self.p

    def _check_compatible(self, other: "Subspace") -> None:
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces live in different ambient spaces")


# ---------------------------------------------------------------------------
# contract operations


def row_reduce(m: Mat):
    """RREF of a matrix together with its pivot column indices."""
    r, piv = rref(m.a, m.p)
    return Mat(m.p, r), [int(c) for c in piv]


def solve_linear(a: Mat, b) -> Optional[np.ndarray]:
    return solve(a.a, b, a.p)


def kernel_basis(a: Mat) -> Subspace:
    return Subspace(a.p, a.cols, kernel(a.a, a.p))


class SubspaceAlgebra(NamedTuple):
    sum: Subspace
    intersection: Subspace
    contains: bool
    quotient_reps: np.ndarray


def subspace_algebra(u: Subspace, w: Subspace) -> SubspaceAlgebra:
    """Sum, intersection, containment (w <= u) and quotient data for u."""
    return SubspaceAlgebra(u.add(w), u.intersect(w), u.contains(w), u.quotient_reps())
