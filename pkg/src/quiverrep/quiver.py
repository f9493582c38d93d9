"""Finite acyclic quivers and their representations over F_p.

A representation assigns to each vertex a column-coordinate space F_p^d
and to each arrow ``a: i -> j`` a ``(d_j x d_i)`` matrix acting on column
vectors.  Morphisms are vertex-indexed matrix families satisfying the
commuting-square condition, which the constructor checks.

Composition convention: ``compose(g, f)`` is ``g o f`` and multiplies the
component matrices as ``G @ F``.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .linalg import Subspace, asmod, kernel, matmul

END_ENUM_CAP = 2 ** 16


class DecompositionCapError(RuntimeError):
    """Raised when certifying indecomposability would need too large an enumeration."""


@dataclass(frozen=True)
class Quiver:
    """A finite acyclic quiver with named arrows."""

    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[str, str, str], ...]  # (name, source, target)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(
            self, "arrows", tuple((str(n), str(s), str(t)) for n, s, t in self.arrows)
        )
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        names = [n for n, _, _ in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        vset = set(self.vertices)
        for n, s, t in self.arrows:
            if s not in vset or t not in vset:
                raise ValueError(f"arrow {n} references unknown vertex")
        self._toposort()

    def _toposort(self) -> List[str]:
        indeg = {v: 0 for v in self.vertices}
        for _, _, t in self.arrows:
            indeg[t] += 1
        order, ready = [], [v for v in self.vertices if indeg[v] == 0]
        while ready:
            v = ready.pop()
            order.append(v)
            for _, s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
        if len(order) != len(self.vertices):
            raise ValueError("acyclicity violated: quiver has a directed cycle")
        return order

    def arrow(self, name: str) -> Tuple[str, str, str]:
        for arr in self.arrows:
            if arr[0] == name:
                return arr
        raise KeyError(name)

    def arrows_from(self, v: str):
        return [arr for arr in self.arrows if arr[1] == v]

    def arrows_into(self, v: str):
        return [arr for arr in self.arrows if arr[2] == v]

    def paths(self, src: str, tgt: str) -> List[Tuple[str, ...]]:
        """All directed paths src -> tgt as arrow-name tuples, in (length, names) order."""
        found: List[Tuple[str, ...]] = []
        stack = [(src, ())]
        while stack:
            v, path = stack.pop()
            if v == tgt:
                found.append(path)
            for name, _, t in self.arrows_from(v):
                stack.append((t, path + (name,)))
        found.sort(key=lambda q: (len(q), q))
        return found

    def path_target(self, src: str, path: Tuple[str, ...]) -> str:
        v = src
        for name in path:
            _, s, t = self.arrow(name)
            if s != v:
                raise ValueError("path is not composable")
            v = t
        return v

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple((n, t, s) for n, s, t in self.arrows))

    def underlying_edges(self) -> List[Tuple[str, str]]:
        return [(s, t) for _, s, t in self.arrows]


class Representation:
    """A finite-dimensional representation of an acyclic quiver over F_p."""

    def __init__(self, quiver: Quiver, p: int, dims: Dict[str, int], maps: Dict[str, np.ndarray]):
        linalg.check_prime(p)
        self.quiver = quiver
        self.p = p
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise ValueError("dimensions must be non-negative")
        self.maps: Dict[str, np.ndarray] = {}
        for name, s, t in quiver.arrows:
            m = maps.get(name)
            shape = (self.dims[t], self.dims[s])
            if m is None:
                m = np.zeros(shape, dtype=np.int64)
            else:
                m = asmod(m, p).reshape(shape) if np.asarray(m).size == shape[0] * shape[1] else asmod(m, p)
            if m.shape != shape:
                raise ValueError(f"map for arrow {name} has shape {m.shape}, expected {shape}")
            m = np.ascontiguousarray(m)
            m.setflags(write=False)
            self.maps[name] = m
        self.offsets = {}
        off = 0
        for v in quiver.vertices:
            self.offsets[v] = off
            off += self.dims[v]
        self.total_dim = off
        self._hash = hash(
            (
                quiver,
                p,
                tuple(self.dims[v] for v in quiver.vertices),
                tuple(self.maps[n].tobytes() for n, _, _ in quiver.arrows),
            )
        )

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and self.quiver == other.quiver
            and self.p == other.p
            and self.dims == other.dims
            and all(np.array_equal(self.maps[n], other.maps[n]) for n, _, _ in self.quiver.arrows)
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        dims = ",".join(f"{v}:{self.dims[v]}" for v in self.quiver.vertices)
        return f"Rep({dims})"

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def apply_path(self, src: str, path: Tuple[str, ...]) -> np.ndarray:
        """Composite arrow matrix along a path starting at src."""
        v = src
        m = np.eye(self.dims[src], dtype=np.int64)
        for name in path:
            _, s, t = self.quiver.arrow(name)
            if s != v:
                raise ValueError("path is not composable from the given vertex")
            m = matmul(self.maps[name], m, self.p)
            v = t
        return m

    def radical_subspaces(self) -> Dict[str, Subspace]:
        """Per-vertex radical: the span of the images of all arrow maps."""
        out = {}
        for v in self.quiver.vertices:
            cols = [self.maps[n].T for n, _, t in self.quiver.arrows_into(v)]
            if cols:
                vecs = np.concatenate(cols, axis=0)
            else:
                vecs = np.zeros((0, self.dims[v]), dtype=np.int64)
            out[v] = Subspace(self.p, self.dims[v], vecs)
        return out

    def top_dims(self) -> Dict[str, int]:
        rad = self.radical_subspaces()
        return {v: self.dims[v] - rad[v].dim for v in self.quiver.vertices}


class RepMorphism:
    """A morphism of representations; the commuting squares are checked."""

    def __init__(self, source: Representation, target: Representation,
                 components: Dict[str, np.ndarray], check: bool = True):
        if source.quiver != target.quiver or source.p != target.p:
            raise ValueError("morphism endpoints live over different quivers or primes")
        self.source = source
        self.target = target
        self.p = source.p
        self.components: Dict[str, np.ndarray] = {}
        for v in source.quiver.vertices:
            shape = (target.dims[v], source.dims[v])
            c = components.get(v)
            if c is None:
                c = np.zeros(shape, dtype=np.int64)
            else:
                c = asmod(c, self.p)
            if c.shape != shape:
                raise ValueError(f"component at {v} has shape {c.shape}, expected {shape}")
            c = np.ascontiguousarray(c)
            c.setflags(write=False)
            self.components[v] = c
        if check:
            for name, s, t in source.quiver.arrows:
                lhs = matmul(self.components[t], source.maps[name], self.p)
                rhs = matmul(target.maps[name], self.components[s], self.p)
                if not np.array_equal(lhs, rhs):
                    raise ValueError(f"commuting square fails at arrow {name}")

    def __eq__(self, other):
        return (
            isinstance(other, RepMorphism)
            and self.source == other.source
            and self.target == other.target
            and all(
                np.array_equal(self.components[v], other.components[v])
                for v in self.source.quiver.vertices
            )
        )

    def __hash__(self):
        return hash(
            (
                self.source,
                self.target,
                tuple(self.components[v].tobytes() for v in self.source.quiver.vertices),
            )
        )

    def flatten(self) -> np.ndarray:
        parts = [self.components[v].ravel() for v in self.source.quiver.vertices]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    @staticmethod
    def from_flat(source: Representation, target: Representation, flat: np.ndarray,
                  check: bool = True) -> "RepMorphism":
        comps = {}
        off = 0
        for v in source.quiver.vertices:
            n = target.dims[v] * source.dims[v]
            comps[v] = flat[off:off + n].reshape(target.dims[v], source.dims[v])
            off += n
        return RepMorphism(source, target, comps, check=check)

    def compose(self, other: "RepMorphism") -> "RepMorphism":
        """self o other (apply other first)."""
        if other.target != self.source:
            raise ValueError("morphisms are not composable")
        comps = {
            v: matmul(self.components[v], other.components[v], self.p)
            for v in self.source.quiver.vertices
        }
        return RepMorphism(other.source, self.target, comps, check=False)

    def add(self, other: "RepMorphism") -> "RepMorphism":
        comps = {
            v: (self.components[v] + other.components[v]) % self.p
            for v in self.source.quiver.vertices
        }
        return RepMorphism(self.source, self.target, comps, check=False)

    def scale(self, c: int) -> "RepMorphism":
        comps = {v: (self.components[v] * (c % self.p)) % self.p
                 for v in self.source.quiver.vertices}
        return RepMorphism(self.source, self.target, comps, check=False)

    def negate(self) -> "RepMorphism":
        return self.scale(self.p - 1)

    def is_zero(self) -> bool:
        return all(not self.components[v].any() for v in self.source.quiver.vertices)

    def is_epi(self) -> bool:
        return all(
            linalg.rank(self.components[v], self.p) == self.target.dims[v]
            for v in self.source.quiver.vertices
        )

    def is_mono(self) -> bool:
        return all(
            linalg.rank(self.components[v], self.p) == self.source.dims[v]
            for v in self.source.quiver.vertices
        )

    def is_iso(self) -> bool:
        return (
            all(self.source.dims[v] == self.target.dims[v] for v in self.source.quiver.vertices)
            and self.is_epi()
        )

    def power(self, n: int) -> "RepMorphism":
        if self.source != self.target:
            raise ValueError("powers need an endomorphism")
        result = identity_morphism(self.source)
        base = self
        while n:
            if n & 1:
                result = result.compose(base)
            base = base.compose(base)
            n >>= 1
        return result


def zero_representation(quiver: Quiver, p: int) -> Representation:
    return Representation(quiver, p, {}, {})


def identity_morphism(x: Representation) -> RepMorphism:
    return RepMorphism(
        x, x, {v: np.eye(x.dims[v], dtype=np.int64) for v in x.quiver.vertices}, check=False
    )


def zero_morphism(x: Representation, y: Representation) -> RepMorphism:
    return RepMorphism(x, y, {}, check=False)


# ---------------------------------------------------------------------------
# Hom spaces


@lru_cache(maxsize=None)
def hom_basis(x: Representation, y: Representation) -> Tuple[RepMorphism, ...]:
    """An F_p-basis of Hom(x, y) in a deterministic (RREF) order.

    The flattened coordinates of the returned morphisms form an RREF
    basis, so the coordinates of any morphism in this basis are read off
    its flattening at the pivot positions; see :func:`hom_coords`.
    """
    if x.quiver != y.quiver or x.p != y.p:
        raise ValueError("quiver or prime mismatch")
    p = x.p
    nunk = sum(y.dims[v] * x.dims[v] for v in x.quiver.vertices)
    offs, off = {}, 0
    for v in x.quiver.vertices:
        offs[v] = off
        off += y.dims[v] * x.dims[v]
    rows = []
    for name, s, t in x.quiver.arrows:
        nrows = y.dims[t] * x.dims[s]
        if nrows == 0:
            continue
        block = np.zeros((nrows, nunk), dtype=np.int64)
        # f_t @ X_a : coefficient matrix I (x) X_a^T on vec(f_t)
        m1 = np.kron(np.eye(y.dims[t], dtype=np.int64), x.maps[name].T)
        block[:, offs[t]:offs[t] + y.dims[t] * x.dims[t]] = m1
        # Y_a @ f_s : coefficient matrix Y_a (x) I on vec(f_s)
        m2 = np.kron(y.maps[name], np.eye(x.dims[s], dtype=np.int64))
        block[:, offs[s]:offs[s] + y.dims[s] * x.dims[s]] = (
            block[:, offs[s]:offs[s] + y.dims[s] * x.dims[s]] - m2
        ) % p
        rows.append(block)
    if rows:
        system = np.concatenate(rows, axis=0)
        basis = kernel(system, p)
    else:
        basis = np.eye(nunk, dtype=np.int64)
    return tuple(RepMorphism.from_flat(x, y, row, check=False) for row in basis)


@lru_cache(maxsize=None)
def hom_space(x: Representation, y: Representation) -> Subspace:
    basis = hom_basis(x, y)
    nunk = sum(y.dims[v] * x.dims[v] for v in x.quiver.vertices)
    vecs = np.array([f.flatten() for f in basis], dtype=np.int64).reshape(len(basis), nunk)
    return Subspace(x.p, nunk, vecs)


def hom_coords(f: RepMorphism) -> np.ndarray:
    """Coordinates of f in the hom_basis of its endpoints."""
    return hom_space(f.source, f.target).coords(f.flatten())


def hom_from_coords(x: Representation, y: Representation, coords) -> RepMorphism:
    basis = hom_basis(x, y)
    coords = asmod(coords, x.p)
    if len(coords) != len(basis):
        raise ValueError("coordinate length does not match Hom dimension")
    flat = np.zeros(sum(y.dims[v] * x.dims[v] for v in x.quiver.vertices), dtype=np.int64)
    for c, f in zip(coords, basis):
        flat = (flat + int(c) * f.flatten()) % x.p
    return RepMorphism.from_flat(x, y, flat, check=False)


# ---------------------------------------------------------------------------
# sub- and quotient representations


def sub_representation(x: Representation, spaces: Dict[str, Subspace]):
    """Subrepresentation on given arrow-invariant subspaces; returns (S, inclusion)."""
    p = x.p
    dims = {v: spaces[v].dim for v in x.quiver.vertices}
    maps = {}
    for name, s, t in x.quiver.arrows:
        img = matmul(x.maps[name], spaces[s].basis.T, p).T  # rows: images of basis vectors
        try:
            coords = np.array(
                [spaces[t].coords(row) for row in img], dtype=np.int64
            ).reshape(dims[s], dims[t])
        except ValueError:
            raise ValueError(f"subspaces are not invariant under arrow {name}")
        maps[name] = coords.T
    sub = Representation(x.quiver, p, dims, maps)
    inc = RepMorphism(sub, x, {v: spaces[v].basis.T for v in x.quiver.vertices})
    return sub, inc


def quotient_representation(x: Representation, spaces: Dict[str, Subspace]):
    """Quotient by arrow-invariant subspaces; returns (Q, projection)."""
    p = x.p
    qmaps = {v: spaces[v].quotient_map() for v in x.quiver.vertices}
    lifts = {v: spaces[v].quotient_reps().T for v in x.quiver.vertices}
    dims = {v: qmaps[v].shape[0] for v in x.quiver.vertices}
    maps = {}
    for name, s, t in x.quiver.arrows:
        maps[name] = matmul(matmul(qmaps[t], x.maps[name], p), lifts[s], p)
    quot = Representation(x.quiver, p, dims, maps)
    proj = RepMorphism(x, quot, qmaps)
    return quot, proj


@dataclass(frozen=True)
class Factorization:
    kernel: Representation
    kernel_inclusion: RepMorphism
    image: Representation
    image_inclusion: RepMorphism
    epi_part: RepMorphism  # source -> image
    cokernel: Representation
    cokernel_projection: RepMorphism


def morphism_factorization(f: RepMorphism) -> Factorization:
    """Kernel, epi-mono factorization and cokernel of a morphism."""
    p = f.p
    q = f.source.quiver
    ker_spaces = {v: Subspace(p, f.source.dims[v], kernel(f.components[v], p)) for v in q.vertices}
    ker, ker_inc = sub_representation(f.source, ker_spaces)
    im_spaces = {v: Subspace(p, f.target.dims[v], f.components[v].T) for v in q.vertices}
    im, im_inc = sub_representation(f.target, im_spaces)
    epi_comps = {}
    for v in q.vertices:
        piv = list(im_spaces[v].pivots)
        epi_comps[v] = f.components[v][piv, :]
    epi = RepMorphism(f.source, im, epi_comps)
    coker, coker_proj = quotient_representation(f.target, im_spaces)
    assert im_inc.compose(epi) == RepMorphism(f.source, f.target, f.components, check=False)
    return Factorization(ker, ker_inc, im, im_inc, epi, coker, coker_proj)


def direct_sum(parts: Sequence[Representation], quiver: Quiver = None, p: int = None):
    """Direct sum with injections and projections; empty input gives zero."""
    parts = list(parts)
    if not parts:
        if quiver is None or p is None:
            raise ValueError("empty direct sum needs an explicit quiver and prime")
        z = zero_representation(quiver, p)
        return z, [], []
    quiver, p = parts[0].quiver, parts[0].p
    dims = {v: sum(x.dims[v] for x in parts) for v in quiver.vertices}
    maps = {}
    for name, s, t in quiver.arrows:
        blocks = [x.maps[name] for x in parts]
        m = np.zeros((dims[t], dims[s]), dtype=np.int64)
        ro = co = 0
        for b in blocks:
            m[ro:ro + b.shape[0], co:co + b.shape[1]] = b
            ro += b.shape[0]
            co += b.shape[1]
        maps[name] = m
    total = Representation(quiver, p, dims, maps)
    injections, projections = [], []
    offs = {v: 0 for v in quiver.vertices}
    for x in parts:
        inj_c, proj_c = {}, {}
        for v in quiver.vertices:
            inj = np.zeros((dims[v], x.dims[v]), dtype=np.int64)
            inj[offs[v]:offs[v] + x.dims[v], :] = np.eye(x.dims[v], dtype=np.int64)
            inj_c[v] = inj
            proj_c[v] = inj.T
        injections.append(RepMorphism(x, total, inj_c, check=False))
        projections.append(RepMorphism(total, x, proj_c, check=False))
        for v in quiver.vertices:
            offs[v] += x.dims[v]
    return total, injections, projections


# ---------------------------------------------------------------------------
# standard projectives / injectives / simples


@dataclass(frozen=True)
class PathBased:
    """A projective or injective presented with its labeled path basis.

    ``labels[v]`` lists, in basis order, pairs ``(summand_index, path)``:
    for kind 'proj' the path runs from the summand vertex to v, for kind
    'inj' from v to the summand vertex.
    """

    rep: Representation
    summands: Tuple[str, ...]
    kind: str  # 'proj' | 'inj'

    @property
    def quiver(self):
        return self.rep.quiver

    def labels(self, v: str) -> List[Tuple[int, Tuple[str, ...]]]:
        out = []
        for idx, w in enumerate(self.summands):
            if self.kind == "proj":
                paths = self.quiver.paths(w, v)
            else:
                paths = self.quiver.paths(v, w)
            out.extend((idx, q) for q in paths)
        return out

    def label_index(self, v: str, summand_idx: int, path: Tuple[str, ...]) -> int:
        return self.labels(v).index((summand_idx, path))


def _projective_rep(quiver: Quiver, p: int, summands: Sequence[str]) -> Representation:
    summands = tuple(summands)
    bases = {}
    for v in quiver.vertices:
        labels = []
        for idx, w in enumerate(summands):
            labels.extend((idx, q) for q in quiver.paths(w, v))
        bases[v] = labels
    dims = {v: len(bases[v]) for v in quiver.vertices}
    maps = {}
    for name, s, t in quiver.arrows:
        m = np.zeros((dims[t], dims[s]), dtype=np.int64)
        index_t = {lab: i for i, lab in enumerate(bases[t])}
        for j, (idx, q) in enumerate(bases[s]):
            m[index_t[(idx, q + (name,))], j] = 1
        maps[name] = m
    return Representation(quiver, p, dims, maps)


def _injective_rep(quiver: Quiver, p: int, summands: Sequence[str]) -> Representation:
    summands = tuple(summands)
    bases = {}
    for v in quiver.vertices:
        labels = []
        for idx, w in enumerate(summands):
            labels.extend((idx, q) for q in quiver.paths(v, w))
        bases[v] = labels
    dims = {v: len(bases[v]) for v in quiver.vertices}
    maps = {}
    for name, s, t in quiver.arrows:
        # a path q: s ~> w maps to r with q = (a,)+r when it starts with a
        m = np.zeros((dims[t], dims[s]), dtype=np.int64)
        index_t = {lab: i for i, lab in enumerate(bases[t])}
        for j, (idx, q) in enumerate(bases[s]):
            if q and q[0] == name:
                m[index_t[(idx, q[1:])], j] = 1
        maps[name] = m
    return Representation(quiver, p, dims, maps)


@lru_cache(maxsize=None)
def standard_projective(quiver: Quiver, p: int, summands: Tuple[str, ...]) -> PathBased:
    return PathBased(_projective_rep(quiver, p, summands), tuple(summands), "proj")


@lru_cache(maxsize=None)
def standard_injective(quiver: Quiver, p: int, summands: Tuple[str, ...]) -> PathBased:
    return PathBased(_injective_rep(quiver, p, summands), tuple(summands), "inj")


def simple(quiver: Quiver, p: int, vertex: str) -> Representation:
    if vertex not in quiver.vertices:
        raise KeyError(vertex)
    return Representation(quiver, p, {vertex: 1}, {})


def standard_objects(quiver: Quiver, p: int, vertex: str):
    """(P(i), I(i), S(i)) for a vertex i."""
    if vertex not in quiver.vertices:
        raise KeyError(vertex)
    return (
        standard_projective(quiver, p, (vertex,)),
        standard_injective(quiver, p, (vertex,)),
        simple(quiver, p, vertex),
    )


@lru_cache(maxsize=None)
def projective_cover(x: Representation):
    """Projective cover (P, pi) with P a labeled standard projective.

    P is the sum of one P(i) per generator of top(x) = x/rad x; pi is an
    epimorphism with superfluous kernel.
    """
    quiver, p = x.quiver, x.p
    rad = x.radical_subspaces()
    summands: List[str] = []
    gens: List[Tuple[str, np.ndarray]] = []
    for v in quiver.vertices:
        for rep in rad[v].quotient_reps():
            summands.append(v)
            gens.append((v, rep))
    proj = standard_projective(quiver, p, tuple(summands))
    comps = {}
    for v in quiver.vertices:
        cols = []
        for idx, w in enumerate(proj.summands):
            gv, gvec = gens[idx]
            pathmats = {q: x.apply_path(gv, q) for q in quiver.paths(w, v)}
            for q in quiver.paths(w, v):
                cols.append(matmul(pathmats[q], gvec, p))
        if cols:
            comps[v] = np.array(cols, dtype=np.int64).T
        else:
            comps[v] = np.zeros((x.dims[v], 0), dtype=np.int64)
    pi = RepMorphism(proj.rep, x, comps)
    if not pi.is_epi():
        raise AssertionError("projective cover map failed to be epi")
    return proj, pi


def is_projective(x: Representation) -> bool:
    proj, _ = projective_cover(x)
    return proj.rep.total_dim == x.total_dim


def is_injective(x: Representation) -> bool:
    return is_projective(dual_representation(x))


def dual_representation(x: Representation) -> Representation:
    """Vector-space dual, a representation of the opposite quiver."""
    qop = x.quiver.opposite()
    return Representation(qop, x.p, dict(x.dims), {n: m.T for n, m in x.maps.items()})


def morphism_path_coefficients(f: RepMorphism, src: PathBased, tgt: PathBased):
    """Express f: src -> tgt between standard projectives by path coefficients.

    Returns a dict ``(s, t) -> {path: coeff}`` where s indexes source
    summands P(i_s), t target summands P(j_t), and paths run j_t ~> i_s.
    """
    if f.source != src.rep or f.target != tgt.rep or src.kind != "proj" or tgt.kind != "proj":
        raise ValueError("path coefficients need matching standard projectives")
    quiver = src.quiver
    out = {}
    for s_idx, i_s in enumerate(src.summands):
        col = src.label_index(i_s, s_idx, ())
        vec = f.components[i_s][:, col] if f.components[i_s].size else np.zeros(0, dtype=np.int64)
        labels = tgt.labels(i_s)
        for t_idx, _ in enumerate(tgt.summands):
            coeffs = {}
            for pos, (idx, q) in enumerate(labels):
                if idx == t_idx and vec[pos] % f.p:
                    coeffs[q] = int(vec[pos]) % f.p
            out[(s_idx, t_idx)] = coeffs
    return out


# ---------------------------------------------------------------------------
# decomposition into indecomposables


def _split_by_subspaces(x, spaces_a, spaces_b):
    """Internal direct sum decomposition x = A (+) B; returns (A, incA, projA, B, incB, projB)."""
    p = x.p
    a, inc_a = sub_representation(x, spaces_a)
    b, inc_b = sub_representation(x, spaces_b)
    proj_a_c, proj_b_c = {}, {}
    for v in x.quiver.vertices:
        stacked = np.concatenate([spaces_a[v].basis, spaces_b[v].basis], axis=0)
        if stacked.shape[0] != x.dims[v]:
            raise ValueError("subspaces do not decompose the ambient space")
        n = x.dims[v]
        aug = np.concatenate([stacked.T, np.eye(n, dtype=np.int64)], axis=1)
        r, piv = linalg.rref(aug, p)
        if list(piv[:n]) != list(range(n)):
            raise ValueError("subspaces do not decompose the ambient space")
        inv = r[:, n:]  # (stacked.T)^{-1}
        proj_a_c[v] = inv[: spaces_a[v].dim, :]
        proj_b_c[v] = inv[spaces_a[v].dim:, :]
    proj_a = RepMorphism(x, a, proj_a_c)
    proj_b = RepMorphism(x, b, proj_b_c)
    return a, inc_a, proj_a, b, inc_b, proj_b


def _fitting_split(x: Representation):
    """Try to split x; returns None if certified indecomposable.

    Candidates u run over the End basis, pairwise sums, then (within the
    enumeration cap) all of End(x); x splits as Ker(u^N) (+) Im(u^N).
    """
    if x.total_dim == 0:
        return None
    basis = hom_basis(x, x)
    m = len(basis)
    if m == 1:
        return None
    n = x.total_dim

    def try_split(u):
        un = u.power(n)
        ker_spaces = {
            v: Subspace(x.p, x.dims[v], kernel(un.components[v], x.p))
            for v in x.quiver.vertices
        }
        im_spaces = {
            v: Subspace(x.p, x.dims[v], un.components[v].T) for v in x.quiver.vertices
        }
        kd = sum(s.dim for s in ker_spaces.values())
        if kd == 0 or kd == x.total_dim:
            return None
        return _split_by_subspaces(x, ker_spaces, im_spaces)

    for u in basis:
        res = try_split(u)
        if res:
            return res
    for i in range(m):
        for j in range(i + 1, m):
            res = try_split(basis[i].add(basis[j]))
            if res:
                return res
    if x.p ** m > END_ENUM_CAP:
        raise DecompositionCapError(
            f"cannot certify indecomposability: End dimension {m} exceeds enumeration cap"
        )
    for coeffs in itertools.product(range(x.p), repeat=m):
        u = None
        for c, b in zip(coeffs, basis):
            if c:
                u = b.scale(c) if u is None else u.add(b.scale(c))
        if u is None:
            continue
        res = try_split(u)
        if res:
            return res
    return None


@lru_cache(maxsize=None)
def decompose(x: Representation) -> Tuple[Tuple[Representation, RepMorphism, RepMorphism], ...]:
    """Decompose into indecomposables: tuples (part, inclusion, projection).

    The inclusions/projections satisfy sum(inc o proj) = id and
    proj_i o inc_i = id, which is verified.
    """
    if x.total_dim == 0:
        return ()
    split = _fitting_split(x)
    if split is None:
        return ((x, identity_morphism(x), identity_morphism(x)),)
    a, inc_a, proj_a, b, inc_b, proj_b = split
    out = []
    for part, inc, proj in decompose(a):
        out.append((part, inc_a.compose(inc), proj.compose(proj_a)))
    for part, inc, proj in decompose(b):
        out.append((part, inc_b.compose(inc), proj.compose(proj_b)))
    total = None
    for part, inc, proj in out:
        piece = inc.compose(proj)
        total = piece if total is None else total.add(piece)
        assert proj.compose(inc) == identity_morphism(part)
    assert total == identity_morphism(x)
    return tuple(out)


def _indecomposable_iso(x: Representation, y: Representation) -> bool:
    if x.dims != y.dims:
        return False
    return any(f.is_iso() for f in hom_basis(x, y))


@lru_cache(maxsize=None)
def is_isomorphic(x: Representation, y: Representation) -> bool:
    if x.quiver != y.quiver or x.p != y.p:
        return False
    if x.dims != y.dims:
        return False
    basis = hom_basis(x, y)
    for f in basis:
        if f.is_iso():
            return True
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if basis[i].add(basis[j]).is_iso():
                return True
    xs = [part for part, _, _ in decompose(x)]
    ys = [part for part, _, _ in decompose(y)]
    if len(xs) != len(ys):
        return False
    used = [False] * len(ys)
    for part in xs:
        for k, other in enumerate(ys):
            if not used[k] and _indecomposable_iso(part, other):
                used[k] = True
                break
        else:
            return False
    return True


def iso_multiset(x: Representation) -> List[Tuple[Representation, int]]:
    """Indecomposable summands with multiplicities, up to isomorphism."""
    reps: List[Tuple[Representation, int]] = []
    for part, _, _ in decompose(x):
        for k, (known, mult) in enumerate(reps):
            if _indecomposable_iso(part, known):
                reps[k] = (known, mult + 1)
                break
        else:
            reps.append((part, 1))
    return reps


def in_add(x: Representation, k: Representation, strip_projectives: bool = False) -> bool:
    """Whether every indecomposable summand of x occurs in k (up to iso).

    With ``strip_projectives`` the projective summands of x are ignored
    first, matching the convention used for determinedness statements.
    """
    k_parts = [part for part, _, _ in decompose(k)]
    for part, _, _ in decompose(x):
        if strip_projectives and is_projective(part):
            continue
        if not any(_indecomposable_iso(part, other) for other in k_parts):
            return False
    return True
