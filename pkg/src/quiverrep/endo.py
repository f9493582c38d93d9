"""Endomorphism algebras and their finite modules.

Gamma(K) = End(K) is materialized by structure constants over the
hom_basis of K; Ext^1(Y, K) becomes a left Gamma(K)-module via pushout
and stable Hom(C, Y) a left Gamma(C)^op-module via precomposition.
Radicals, projective covers and full submodule lattices are computed
exactly; every enumeration is capped, never truncated silently.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from . import linalg
from .linalg import Subspace, asmod, kernel, matmul
from .quiver import (
    RepMorphism,
    Representation,
    direct_sum,
    hom_basis,
    hom_coords,
    hom_from_coords,
    iso_multiset,
)
from .ext import ExtSpace, ext_space, pushout_ext, realize_ext, ses_to_class

LATTICE_CAP = 2 ** 20
RADICAL_ENUM_CAP = 2 ** 16


class EnumerationCapError(RuntimeError):
    pass


class FDAlgebra:
    """A finite-dimensional associative unital F_p-algebra by structure constants."""

    def __init__(self, p: int, table: np.ndarray, unit: np.ndarray, provenance=None,
                 check: bool = True):
        self.p = p
        self.table = asmod(table, p)  # table[i, j, k]: coefficient of b_k in b_i * b_j
        self.dim = self.table.shape[0]
        if self.table.shape != (self.dim, self.dim, self.dim):
            raise ValueError("structure constant table must be cubic")
        self.unit = asmod(unit, p).reshape(self.dim)
        self.provenance = provenance
        # left/right multiplication operators: (b_i * v) = L[i] @ v, (v * b_i) = R[i] @ v
        self.left_ops = np.transpose(self.table, (0, 2, 1))
        self.right_ops = np.transpose(self.table, (1, 2, 0))
        self._flat = np.ascontiguousarray(self.table.reshape(self.dim, -1))
        self._radical = None
        if check:
            self._check_axioms()

    def _check_axioms(self):
        p = self.p
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    lhs = self.multiply(self.table[i, j], self._e(k))
                    rhs = self.multiply(self._e(i), self.table[j, k])
                    if not np.array_equal(lhs, rhs):
                        raise ValueError("associativity fails on basis triple")
            if not np.array_equal(self.multiply(self.unit, self._e(i)), self._e(i)):
                raise ValueError("left unit law fails")
            if not np.array_equal(self.multiply(self._e(i), self.unit), self._e(i)):
                raise ValueError("right unit law fails")

    def _e(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def multiply(self, x, y) -> np.ndarray:
        x = asmod(x, self.p)
        y = asmod(y, self.p)
        # contract x into the table first: (x*b_j) coefficients as rows
        return (y @ (x @ self._flat).reshape(self.dim, self.dim)) % self.p

    def opposite(self) -> "FDAlgebra":
        return FDAlgebra(
            self.p,
            np.transpose(self.table, (1, 0, 2)),
            self.unit,
            provenance=("opposite", self.provenance),
            check=False,
        )

    def is_invertible(self, x) -> bool:
        # x is invertible iff left multiplication by x is
        lm = np.einsum("ijk,i->kj", self.table, asmod(x, self.p)) % self.p
        return linalg.rank(lm, self.p) == self.dim

    def elements(self, cap: int = RADICAL_ENUM_CAP):
        if self.p ** self.dim > cap:
            raise EnumerationCapError(
                f"algebra with dimension {self.dim} exceeds the enumeration cap"
            )
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield np.array(coeffs, dtype=np.int64)

    def ideal_generated(self, vectors) -> Subspace:
        """Two-sided ideal generated by the given elements (plus a subspace)."""
        span = Subspace.from_vectors(np.atleast_2d(np.asarray(vectors, dtype=np.int64)),
                                     self.dim, self.p)
        while True:
            new = [span.basis]
            for op in itertools.chain(self.left_ops, self.right_ops):
                new.append(matmul(op, span.basis.T, self.p).T)
            grown = Subspace.from_vectors(np.concatenate(new, axis=0), self.dim, self.p)
            if grown.dim == span.dim:
                return span
            span = grown

    def ideal_is_nilpotent(self, ideal: Subspace) -> bool:
        power = ideal
        for _ in range(self.dim + 1):
            if power.dim == 0:
                return True
            blocks = [
                (ideal.basis @ (x @ self._flat).reshape(self.dim, self.dim)) % self.p
                for x in power.basis
            ]
            nxt = Subspace.from_vectors(
                np.concatenate(blocks, axis=0), self.dim, self.p,
            )
            if nxt.dim == power.dim and nxt == power:
                return False
            power = nxt
        return power.dim == 0


@lru_cache(maxsize=None)
def endo_algebra(k: Representation) -> FDAlgebra:
    """End(K) with basis hom_basis(K, K)."""
    basis = hom_basis(k, k)
    m = len(basis)
    table = np.zeros((m, m, m), dtype=np.int64)
    for i, f in enumerate(basis):
        for j, g in enumerate(basis):
            table[i, j] = hom_coords(f.compose(g))
    unit = (
        hom_coords(_identity(k)) if m else np.zeros(0, dtype=np.int64)
    )
    return FDAlgebra(k.p, table, unit, provenance=("endomorphisms", k))


def _identity(x: Representation) -> RepMorphism:
    from .quiver import identity_morphism

    return identity_morphism(x)


class FDModule:
    """A finite left module over an FDAlgebra, given by action matrices."""

    def __init__(self, algebra: FDAlgebra, action: np.ndarray, check: bool = True):
        self.algebra = algebra
        self.p = algebra.p
        self.action = asmod(action, self.p)  # shape (algebra.dim, d, d)
        if self.action.ndim != 3 or self.action.shape[0] != algebra.dim:
            raise ValueError("action tensor must have one matrix per algebra basis element")
        self.dim = self.action.shape[1]
        if check:
            self._check_axioms()

    def _check_axioms(self):
        p = self.p
        a = self.algebra
        for i in range(a.dim):
            for j in range(a.dim):
                lhs = matmul(self.action[i], self.action[j], p)
                rhs = np.einsum("k,kab->ab", a.table[i, j], self.action) % p
                if not np.array_equal(lhs, rhs):
                    raise ValueError("module action violates the structure constants")
        unit_act = np.einsum("k,kab->ab", a.unit, self.action) % p
        if not np.array_equal(unit_act, np.eye(self.dim, dtype=np.int64)):
            raise ValueError("unit does not act as identity")

    def act(self, a_coords, v) -> np.ndarray:
        mat = np.einsum("k,kab->ab", asmod(a_coords, self.p), self.action) % self.p
        return matmul(mat, asmod(v, self.p), self.p)

    def is_stable(self, s: Subspace) -> bool:
        if s.ambient_dim != self.dim:
            raise ValueError("subspace lives in the wrong ambient space")
        for mat in self.action:
            for row in s.basis:
                if not s.contains_vector(matmul(mat, row, self.p)):
                    return False
        return True

    def spin(self, v) -> Subspace:
        """Cyclic submodule generated by v (includes v itself; unit acts as id)."""
        span = Subspace.from_vectors([v], self.dim, self.p)
        frontier = [asmod(v, self.p)]
        while frontier:
            nxt = []
            for w in frontier:
                for mat in self.action:
                    u = matmul(mat, w, self.p)
                    if not span.contains_vector(u):
                        span = span.add(Subspace.from_vectors([u], self.dim, self.p))
                        nxt.append(u)
            frontier = nxt
        return span

    def restrict(self, s: Subspace) -> "FDModule":
        """Module structure on a stable subspace, in its internal coordinates."""
        if not self.is_stable(s):
            raise ValueError("subspace is not action-stable")
        acts = np.zeros((self.algebra.dim, s.dim, s.dim), dtype=np.int64)
        for i, mat in enumerate(self.action):
            imgs = matmul(mat, s.basis.T, self.p).T
            acts[i] = np.array([s.coords(row) for row in imgs],
                               dtype=np.int64).reshape(s.dim, s.dim).T
        return FDModule(self.algebra, acts, check=False)

    def quotient(self, s: Subspace) -> Tuple["FDModule", np.ndarray]:
        """Quotient by a stable subspace; returns (module, projection matrix)."""
        if not self.is_stable(s):
            raise ValueError("subspace is not action-stable")
        qm = s.quotient_map()
        lift = s.quotient_reps().T
        d = qm.shape[0]
        acts = np.zeros((self.algebra.dim, d, d), dtype=np.int64)
        for i, mat in enumerate(self.action):
            acts[i] = matmul(matmul(qm, mat, self.p), lift, self.p)
        return FDModule(self.algebra, acts, check=False), qm


def module_hom_basis(m: FDModule, n: FDModule) -> List[np.ndarray]:
    """Basis of the space of module maps m -> n (same algebra)."""
    if m.algebra is not n.algebra and m.algebra.dim != n.algebra.dim:
        raise ValueError("modules over different algebras")
    p = m.p
    nunk = n.dim * m.dim
    if nunk == 0:
        return []
    rows = []
    for i in range(m.algebra.dim):
        # h @ actM_i - actN_i @ h = 0
        m1 = np.kron(np.eye(n.dim, dtype=np.int64), m.action[i].T)
        m2 = np.kron(n.action[i], np.eye(m.dim, dtype=np.int64))
        rows.append((m1 - m2) % p)
    system = np.concatenate(rows, axis=0) if rows else np.zeros((0, nunk), dtype=np.int64)
    return [row.reshape(n.dim, m.dim) for row in kernel(system, p)]


# ---------------------------------------------------------------------------
# radical


def radical(a: FDAlgebra) -> Subspace:
    """The Jacobson radical, as the largest nilpotent ideal.

    Saturation over basis elements first; completeness is then certified
    by sweeping all elements of the quotient (capped), since an element
    lies in the radical iff it generates a nilpotent ideal modulo the
    part already found.
    """
    if a.dim == 0:
        return Subspace.zero(0, a.p)
    if a._radical is not None:
        return a._radical
    found = Subspace.zero(a.dim, a.p)

    def grows(x) -> bool:
        nonlocal found
        if found.contains_vector(x):
            return False
        # members of a nilpotent ideal are nilpotent elements: cheap pre-filter
        power = np.asarray(x, dtype=np.int64)
        e = 1
        while e < a.dim:
            power = a.multiply(power, power)
            e *= 2
        if power.any():
            return False
        ideal = a.ideal_generated(np.concatenate([found.basis, [x]], axis=0)
                                  if found.dim else [x])
        if a.ideal_is_nilpotent(ideal):
            found = ideal
            return True
        return False

    changed = True
    while changed:
        changed = False
        for i in range(a.dim):
            if grows(a._e(i)):
                changed = True
    # certification sweep over the remaining cosets
    swept = False
    while not swept:
        swept = True
        for x in a.elements():
            nz = np.nonzero(x)[0]
            if nz.size == 0 or x[nz[0]] != 1:  # the radical is closed under scaling
                continue
            if grows(x):
                swept = False
                break
    a._radical = found
    return found


def radical_of_module(m: FDModule, rad: Optional[Subspace] = None) -> Subspace:
    """rad(M) = rad(A) . M."""
    if rad is None:
        rad = radical(m.algebra)
    vecs = []
    for a_coords in rad.basis:
        mat = np.einsum("k,kab->ab", a_coords, m.action) % m.p
        vecs.append(mat.T)
    if not vecs:
        return Subspace.zero(m.dim, m.p)
    return Subspace.from_vectors(np.concatenate(vecs, axis=0), m.dim, m.p)


# ---------------------------------------------------------------------------
# submodule lattices


@dataclass(frozen=True)
class SubmoduleLattice:
    module: FDModule
    members: Tuple[Subspace, ...]
    inclusions: Tuple[Tuple[int, int], ...]  # (i, j) with members[i] <= members[j], i != j

    def index_of(self, s: Subspace) -> int:
        return self.members.index(s)

    def maximal_members(self) -> List[Subspace]:
        """Maximal proper submodules."""
        full = self.members.index(max(self.members, key=lambda s: s.dim))
        out = []
        for i, s in enumerate(self.members):
            if s.dim == self.module.dim:
                continue
            covers = [
                j
                for (a, j) in self.inclusions
                if a == i and self.members[j].dim < self.module.dim
            ]
            if not covers:
                out.append(s)
        return out


def submodule_lattice(m: FDModule) -> SubmoduleLattice:
    """All action-stable subspaces, by spinning every cyclic submodule."""
    if m.p ** m.dim > LATTICE_CAP:
        raise EnumerationCapError(
            f"submodule enumeration for carrier dimension {m.dim} exceeds the cap"
        )
    seen = {Subspace.zero(m.dim, m.p)}
    for coeffs in itertools.product(range(m.p), repeat=m.dim):
        v = np.array(coeffs, dtype=np.int64)
        nz = np.nonzero(v)[0]
        if nz.size == 0 or v[nz[0]] != 1:  # normalize scalar multiples
            continue
        seen.add(m.spin(v))
    members = set(seen)
    frontier = set(seen)
    while frontier:
        fresh = set()
        for s in frontier:
            for t in members:
                u = s.add(t)
                if u not in members and u not in fresh:
                    fresh.add(u)
        members |= fresh
        frontier = fresh
    ordered = sorted(members, key=lambda s: (s.dim, s.basis.tobytes()))
    incl = tuple(
        (i, j)
        for i, s in enumerate(ordered)
        for j, t in enumerate(ordered)
        if i != j and t.contains(s)
    )
    return SubmoduleLattice(m, tuple(ordered), incl)


def all_subspaces(ambient_dim: int, p: int) -> List[Subspace]:
    """Every subspace of F_p^n (brute-force oracle; small n only)."""
    if p ** ambient_dim > 2 ** 12:
        raise EnumerationCapError("subspace enumeration is limited to tiny ambients")
    vectors = [
        np.array(c, dtype=np.int64)
        for c in itertools.product(range(p), repeat=ambient_dim)
        if any(c)
    ]
    found = {Subspace.zero(ambient_dim, p)}
    frontier = {Subspace.zero(ambient_dim, p)}
    while frontier:
        fresh = set()
        for s in frontier:
            for v in vectors:
                if not s.contains_vector(v):
                    grown = s.add(Subspace.from_vectors([v], ambient_dim, p))
                    if grown not in found:
                        fresh.add(grown)
        found |= fresh
        frontier = fresh
    return sorted(found, key=lambda s: (s.dim, s.basis.tobytes()))


# ---------------------------------------------------------------------------
# Ext and stable Hom as modules


@lru_cache(maxsize=None)
def _realized_basis(y: Representation, k: Representation):
    space = ext_space(y, k)
    from .ext import ExtClass

    out = []
    for i in range(space.dimension):
        coords = np.zeros(space.dimension, dtype=np.int64)
        coords[i] = 1
        out.append(realize_ext(ExtClass(space, coords)))
    return space, tuple(out)


@lru_cache(maxsize=None)
def ext_as_gamma_module(y: Representation, k: Representation) -> FDModule:
    """Ext^1(Y, K) as a left module over End(K), acting by pushout."""
    algebra = endo_algebra(k)
    space, realized = _realized_basis(y, k)
    basis = hom_basis(k, k)
    acts = np.zeros((algebra.dim, space.dimension, space.dimension), dtype=np.int64)
    for i, g in enumerate(basis):
        for b, ses in enumerate(realized):
            acts[i][:, b] = ses_to_class(pushout_ext(g, ses), space).coords
    return FDModule(algebra, acts)


@lru_cache(maxsize=None)
def stablehom_as_gammaop_module(c: Representation, y: Representation) -> FDModule:
    """stable Hom(C, Y) as a left module over End(C)^op, acting by precomposition."""
    from .arduality import stable_hom

    sh = stable_hom(c, y)
    algebra = endo_algebra(c).opposite()
    basis = hom_basis(c, c)
    acts = np.zeros((algebra.dim, sh.dimension, sh.dimension), dtype=np.int64)
    for i, g in enumerate(basis):
        for j, f in enumerate(sh.basis_reps):
            acts[i][:, j] = sh.project(f.compose(g))
    return FDModule(algebra, acts)


# ---------------------------------------------------------------------------
# projective covers of Ext submodules


@dataclass(frozen=True)
class GammaCover:
    """A projective cover of a submodule L of Ext^1(Y, K) over Gamma(K).

    kprime is an object of add K; the map sends hom coordinates of
    Hom(kprime, K) to Ext coordinates, with image L and superfluous kernel.
    """

    y: Representation
    k: Representation
    kprime: Representation
    summand_types: Tuple[Representation, ...]
    matrix: np.ndarray  # (ext dim) x (dim Hom(kprime, K))
    image: Subspace
    kernel: Subspace


def _simple_summands(t: FDModule) -> List[Subspace]:
    """Decompose a semisimple module into simple summands (subspaces)."""
    if t.dim == 0:
        return []
    cyclics = set()
    for coeffs in itertools.product(range(t.p), repeat=t.dim):
        v = np.array(coeffs, dtype=np.int64)
        nz = np.nonzero(v)[0]
        if nz.size == 0 or v[nz[0]] != 1:
            continue
        cyclics.add(t.spin(v))
    simples = []
    for w in sorted(cyclics, key=lambda s: (s.dim, s.basis.tobytes())):
        if all(t.spin(row) == w for row in w.basis) and _every_vector_generates(t, w):
            simples.append(w)
    chosen: List[Subspace] = []
    total = Subspace.zero(t.dim, t.p)
    for w in simples:
        if total.dim == t.dim:
            break
        if total.intersect(w).dim == 0:
            chosen.append(w)
            total = total.add(w)
    if total.dim != t.dim:
        raise AssertionError("top of the module failed to be semisimple")
    return chosen


def _every_vector_generates(t: FDModule, w: Subspace) -> bool:
    sub = t.restrict(w)
    for coeffs in itertools.product(range(t.p), repeat=w.dim):
        v = np.array(coeffs, dtype=np.int64)
        if v.any() and sub.spin(v).dim != w.dim:
            return False
    return True


def gamma_projective_cover(y: Representation, k: Representation, l: Subspace) -> GammaCover:
    """Projective cover of the stable submodule L of Ext^1(Y, K)."""
    module = ext_as_gamma_module(y, k)
    algebra = module.algebra
    space = ext_space(y, k)
    if not module.is_stable(l):
        raise ValueError("submodule is not stable under the endomorphism action")
    if l.dim == 0:
        from .quiver import zero_representation

        z = zero_representation(y.quiver, y.p)
        return GammaCover(y, k, z, (), np.zeros((space.dimension, 0), dtype=np.int64),
                          Subspace.zero(space.dimension, y.p),
                          Subspace.zero(0, y.p))
    rad_a = radical(algebra)
    l_mod = module.restrict(l)
    rad_l = radical_of_module(l_mod, rad_a)
    top, top_proj = l_mod.quotient(rad_l)

    types = [part for part, _ in iso_multiset(k)]
    proj_modules = []
    for k_i in types:
        hb = hom_basis(k_i, k)
        acts = np.zeros((algebra.dim, len(hb), len(hb)), dtype=np.int64)
        for gi, g in enumerate(hom_basis(k, k)):
            for j, h in enumerate(hb):
                acts[gi][:, j] = hom_coords(g.compose(h))
        proj_modules.append(FDModule(algebra, acts, check=False))

    chosen: List[Tuple[int, np.ndarray]] = []  # (type index, map P_i -> L in l-coords)
    for w in _simple_summands(top):
        w_mod = top.restrict(w)
        placed = False
        for ti, p_mod in enumerate(proj_modules):
            maps = module_hom_basis(p_mod, w_mod)
            maps = [m for m in maps if m.any()]
            if not maps:
                continue
            phi_bar = matmul(w.basis.T, maps[0], y.p)  # P_i -> top, image w
            # lift through L ->> top
            lhom = module_hom_basis(p_mod, l_mod)
            if lhom:
                cols = np.array(
                    [matmul(top_proj, h, y.p).ravel() for h in lhom], dtype=np.int64
                ).T
            else:
                cols = np.zeros((phi_bar.size, 0), dtype=np.int64)
            sol = linalg.solve(cols, phi_bar.ravel(), y.p)
            if sol is None:
                raise AssertionError("projective lift through the top failed")
            phi = np.zeros((l.dim, p_mod.dim), dtype=np.int64)
            for cidx, coeff in enumerate(sol):
                if coeff:
                    phi = (phi + int(coeff) * lhom[cidx]) % y.p
            chosen.append((ti, phi))
            placed = True
            break
        if not placed:
            raise AssertionError("no projective maps onto a top constituent")

    parts = [types[ti] for ti, _ in chosen]
    kprime, injections, _ = direct_sum(parts, quiver=y.quiver, p=y.p)
    hb_kprime = hom_basis(kprime, k)
    mat = np.zeros((space.dimension, len(hb_kprime)), dtype=np.int64)
    for j, h in enumerate(hb_kprime):
        total = np.zeros(space.dimension, dtype=np.int64)
        for (ti, phi), inj in zip(chosen, injections):
            comp = h.compose(inj)  # K_i -> K
            coords = hom_coords(comp)
            lcoords = matmul(phi, coords, y.p)
            total = (total + matmul(l.basis.T, lcoords, y.p)) % y.p
        mat[:, j] = total
    image = Subspace.from_vectors(mat.T, space.dimension, y.p)
    if image != l:
        raise AssertionError("cover image does not equal the submodule")
    ker = Subspace(y.p, len(hb_kprime), kernel(mat, y.p))
    # superfluous kernel: Ker c <= rad(Gamma) . Hom(kprime, K)
    acts = np.zeros((algebra.dim, len(hb_kprime), len(hb_kprime)), dtype=np.int64)
    for gi, g in enumerate(hom_basis(k, k)):
        for j, h in enumerate(hb_kprime):
            acts[gi][:, j] = hom_coords(g.compose(h))
    pk_mod = FDModule(algebra, acts, check=False)
    rad_pk = radical_of_module(pk_mod, rad_a)
    if not rad_pk.contains(ker):
        raise AssertionError("cover kernel is not superfluous")
    return GammaCover(y, k, kprime, tuple(parts), mat, image, ker)
