"""Ext^1 spaces via minimal projective presentations, and extension calculus.

For an acyclic quiver the path algebra is hereditary, so every object Y
has a presentation 0 -> P1 -> P0 -> Y -> 0 with both terms projective and
Ext^1(Y, Z) = coker(Hom(P0, Z) -> Hom(P1, Z)).  Classes convert both ways
between coordinates and short exact sequences (Yoneda), and pushouts /
pullbacks give the two connecting maps.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from . import linalg
from .linalg import Subspace, asmod, kernel, matmul
from .quiver import (
    PathBased,
    RepMorphism,
    Representation,
    hom_basis,
    hom_coords,
    hom_from_coords,
    morphism_factorization,
    projective_cover,
    quotient_representation,
    sub_representation,
    zero_morphism,
)


@dataclass(frozen=True)
class ProjPresentation:
    y: Representation
    p1_proj: PathBased
    p0_proj: PathBased
    p1: RepMorphism  # P1 -> P0, mono
    p0: RepMorphism  # P0 -> Y, epi


@lru_cache(maxsize=None)
def min_proj_presentation(y: Representation) -> ProjPresentation:
    """Minimal presentation 0 -> P1 -> P0 -> Y -> 0 with standard projectives."""
    p0_proj, p0 = projective_cover(y)
    fact = morphism_factorization(p0)
    ker, ker_inc = fact.kernel, fact.kernel_inclusion
    p1_proj, q = projective_cover(ker)
    if p1_proj.rep.total_dim != ker.total_dim:
        raise AssertionError("kernel of a projective cover failed to be projective")
    p1 = ker_inc.compose(q)
    if not p1.is_mono():
        raise AssertionError("presentation map P1 -> P0 failed to be mono")
    return ProjPresentation(y, p1_proj, p0_proj, p1, p0)


class ExtSpace:
    """Ext^1(Y, Z) as coker(Hom(P0,Z) -> Hom(P1,Z)) with fixed coordinates."""

    def __init__(self, y: Representation, z: Representation):
        if y.quiver != z.quiver or y.p != z.p:
            raise ValueError("quiver or prime mismatch")
        self.y = y
        self.z = z
        self.p = y.p
        self.presentation = min_proj_presentation(y)
        pres = self.presentation
        self.hom_p1_basis = hom_basis(pres.p1_proj.rep, z)
        hom_dim = len(self.hom_p1_basis)
        image_vecs = [
            hom_coords(h.compose(pres.p1)) for h in hom_basis(pres.p0_proj.rep, z)
        ]
        self.image = Subspace.from_vectors(
            np.array(image_vecs, dtype=np.int64).reshape(len(image_vecs), hom_dim),
            hom_dim,
            self.p,
        )
        self.quotient_matrix = self.image.quotient_map()
        self.dimension = self.quotient_matrix.shape[0]
        self.basis_reps: Tuple[RepMorphism, ...] = tuple(
            hom_from_coords(pres.p1_proj.rep, z, row) for row in self.image.quotient_reps()
        )
        expected = hom_dim - len(hom_basis(pres.p0_proj.rep, z)) + len(hom_basis(y, z))
        if self.dimension != expected:
            raise AssertionError("Ext dimension violates the hereditary long exact sequence")

    def class_of_cocycle(self, h: RepMorphism) -> "ExtClass":
        """Class of a morphism P1 -> Z."""
        return ExtClass(self, matmul(self.quotient_matrix, hom_coords(h), self.p))

    def representative(self, coords) -> RepMorphism:
        coords = asmod(coords, self.p)
        rep = zero_morphism(self.presentation.p1_proj.rep, self.z)
        for c, h in zip(coords, self.basis_reps):
            if c:
                rep = rep.add(h.scale(int(c)))
        return rep

    def zero_class(self) -> "ExtClass":
        return ExtClass(self, np.zeros(self.dimension, dtype=np.int64))


@lru_cache(maxsize=None)
def ext_space(y: Representation, z: Representation) -> ExtSpace:
    return ExtSpace(y, z)


@dataclass(frozen=True)
class ExtClass:
    space: ExtSpace
    coords: np.ndarray

    def __post_init__(self):
        c = asmod(self.coords, self.space.p)
        if c.shape != (self.space.dimension,):
            raise ValueError("coordinate length does not match Ext dimension")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def __eq__(self, other):
        return (
            isinstance(other, ExtClass)
            and self.space is other.space
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((id(self.space), self.coords.tobytes()))

    def is_zero(self) -> bool:
        return not self.coords.any()

    def add(self, other: "ExtClass") -> "ExtClass":
        return ExtClass(self.space, (self.coords + other.coords) % self.space.p)


class ShortExactSeq:
    """0 -> sub -> middle -> quot -> 0 with verified exactness."""

    def __init__(self, mono: RepMorphism, epi: RepMorphism, check: bool = True):
        if mono.target != epi.source:
            raise ValueError("mono and epi do not share the middle object")
        self.sub = mono.source
        self.middle = mono.target
        self.quot = epi.target
        self.mono = mono
        self.epi = epi
        self.p = mono.p
        if check:
            if not mono.is_mono():
                raise ValueError("sequence start is not mono")
            if not epi.is_epi():
                raise ValueError("sequence end is not epi")
            for v in self.middle.quiver.vertices:
                im = Subspace(self.p, self.middle.dims[v], mono.components[v].T)
                ker = Subspace(self.p, self.middle.dims[v], kernel(epi.components[v], self.p))
                if im != ker:
                    raise ValueError(f"exactness fails at vertex {v}")


def split_sequence(z: Representation, y: Representation) -> ShortExactSeq:
    from .quiver import direct_sum

    total, injs, projs = direct_sum([z, y])
    return ShortExactSeq(injs[0], projs[1])


def sequence_of_epi(alpha: RepMorphism) -> ShortExactSeq:
    """The sequence 0 -> Ker a -> X -> Y -> 0 of an epimorphism."""
    if not alpha.is_epi():
        raise ValueError("morphism is not an epimorphism")
    fact = morphism_factorization(alpha)
    return ShortExactSeq(fact.kernel_inclusion, alpha)


def _quotient_with_induced(amb: Representation, sub_spaces, tail_map: RepMorphism,
                           tail_target: Representation):
    """Quotient amb by sub_spaces and induce tail_map (which kills them)."""
    quot, proj = quotient_representation(amb, sub_spaces)
    comps = {}
    for v in amb.quiver.vertices:
        lift = sub_spaces[v].quotient_reps().T
        comps[v] = matmul(tail_map.components[v], lift, amb.p)
    induced = RepMorphism(quot, tail_target, comps)
    return quot, proj, induced


def pushout_ext(u: RepMorphism, ses: ShortExactSeq) -> ShortExactSeq:
    """Pushout of the sequence along u: sub -> Z."""
    if u.source != ses.sub:
        raise ValueError("pushout map must start at the kernel of the sequence")
    from .quiver import direct_sum

    z = u.target
    total, injs, projs = direct_sum([z, ses.middle])
    # image of w |-> (u w, -mono w)
    phi = injs[0].compose(u).add(injs[1].compose(ses.mono).negate())
    phi_spaces = {
        v: Subspace(total.p, total.dims[v], phi.components[v].T)
        for v in total.quiver.vertices
    }
    tail = ses.epi.compose(projs[1])  # (x_z, x_m) -> epi(x_m); kills Im phi
    quot, proj, epi = _quotient_with_induced(total, phi_spaces, tail, ses.quot)
    mono = proj.compose(injs[0])
    return ShortExactSeq(mono, epi)


def pullback_ext(ses: ShortExactSeq, t: RepMorphism) -> ShortExactSeq:
    """Pullback of the sequence along t: T -> quot."""
    if t.target != ses.quot:
        raise ValueError("pullback map must end at the cokernel of the sequence")
    from .quiver import direct_sum

    total, injs, projs = direct_sum([ses.middle, t.source])
    # kernel of (x, s) |-> epi(x) - t(s)
    psi = ses.epi.compose(projs[0]).add(t.compose(projs[1]).negate())
    ker_spaces = {
        v: Subspace(total.p, total.dims[v], kernel(psi.components[v], total.p))
        for v in total.quiver.vertices
    }
    e, inc = sub_representation(total, ker_spaces)
    lifted = injs[0].compose(ses.mono)  # sub -> total, lands in e
    mono_comps = {}
    for v in total.quiver.vertices:
        cols = lifted.components[v].T
        mono_comps[v] = np.array(
            [ker_spaces[v].coords(row) for row in cols], dtype=np.int64
        ).reshape(ses.sub.dims[v], e.dims[v]).T
    mono = RepMorphism(ses.sub, e, mono_comps)
    epi = projs[1].compose(inc)
    return ShortExactSeq(mono, epi)


def ses_to_class(ses: ShortExactSeq, space: Optional[ExtSpace] = None) -> ExtClass:
    """Ext class of a short exact sequence.

    The cokernel and kernel objects must be identical (not merely
    isomorphic) to the ExtSpace's Y and Z; callers transport along
    isomorphisms explicitly.
    """
    if space is None:
        space = ext_space(ses.quot, ses.sub)
    if ses.quot != space.y or ses.sub != space.z:
        raise ValueError("sequence endpoints do not match the Ext space")
    pres = space.presentation
    p = space.p
    # lift p0 through the epi, using projectivity of P0
    basis = hom_basis(pres.p0_proj.rep, ses.middle)
    if basis:
        cols = np.array(
            [hom_coords(ses.epi.compose(h)) for h in basis], dtype=np.int64
        ).T
    else:
        cols = np.zeros((len(hom_basis(pres.p0_proj.rep, ses.quot)), 0), dtype=np.int64)
    target = hom_coords(pres.p0)
    sol = linalg.solve(cols, target, p)
    if sol is None:
        raise ValueError("no lift of the cover through the epimorphism; sequence not exact")
    lam = zero_morphism(pres.p0_proj.rep, ses.middle)
    for c, h in zip(sol, basis):
        if c:
            lam = lam.add(h.scale(int(c)))
    comp = lam.compose(pres.p1)  # P1 -> middle, lands in Im(mono)
    h_comps = {}
    for v in ses.middle.quiver.vertices:
        rhs = comp.components[v]
        out = np.zeros((ses.sub.dims[v], rhs.shape[1]), dtype=np.int64)
        for j in range(rhs.shape[1]):
            w = linalg.solve(ses.mono.components[v], rhs[:, j], p)
            if w is None:
                raise ValueError("lift does not land in the kernel; sequence not exact")
            out[:, j] = w
        h_comps[v] = out
    h = RepMorphism(pres.p1_proj.rep, ses.sub, h_comps)
    return space.class_of_cocycle(h)


def realize_ext(x: ExtClass) -> ShortExactSeq:
    """A short exact sequence with the given class; kernel object is x's Z."""
    space = x.space
    pres = space.presentation
    h = space.representative(x.coords)
    base = ShortExactSeq(pres.p1, pres.p0, check=False)
    return pushout_ext(h, base)


@dataclass(frozen=True)
class ConnectingMap:
    """A connecting map in fixed hom/ext bases, with image and kernel."""

    matrix: np.ndarray  # (target ext dim) x (source hom dim)
    source_dim: int
    target_space: ExtSpace
    image: Subspace
    kernel: Subspace


def connecting_right(ses: ShortExactSeq, z: Representation) -> ConnectingMap:
    """c(xi, Z): Hom(sub, Z) -> Ext^1(quot, Z), u |-> [u.xi]."""
    space = ext_space(ses.quot, z)
    basis = hom_basis(ses.sub, z)
    cols = [ses_to_class(pushout_ext(u, ses), space).coords for u in basis]
    m = np.array(cols, dtype=np.int64).T.reshape(space.dimension, len(basis))
    image = Subspace.from_vectors(m.T, space.dimension, space.p)
    ker = Subspace(space.p, len(basis), kernel(m, space.p))
    return ConnectingMap(m, len(basis), space, image, ker)


def connecting_left(z: Representation, ses: ShortExactSeq) -> ConnectingMap:
    """c(Z, xi): Hom(Z, quot) -> Ext^1(Z, sub), t |-> [xi.t]."""
    space = ext_space(z, ses.sub)
    basis = hom_basis(z, ses.quot)
    cols = [ses_to_class(pullback_ext(ses, t), space).coords for t in basis]
    m = np.array(cols, dtype=np.int64).T.reshape(space.dimension, len(basis))
    image = Subspace.from_vectors(m.T, space.dimension, space.p)
    ker = Subspace(space.p, len(basis), kernel(m, space.p))
    return ConnectingMap(m, len(basis), space, image, ker)


def euler_form(y: Representation, z: Representation) -> int:
    """dim Hom - dim Ext predicted by dimension vectors alone."""
    q = y.quiver
    total = sum(y.dims[v] * z.dims[v] for v in q.vertices)
    for _, s, t in q.arrows:
        total -= y.dims[s] * z.dims[t]
    return total
