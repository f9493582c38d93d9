"""The Nakayama functor, the translate tau, stable Hom and the trace pairing.

For a hereditary path algebra the Nakayama functor sends the labeled
projective P(i) to the labeled injective I(i); on morphisms it acts on
path coefficients.  The translate of X is the kernel of the Nakayama
image of a minimal projective presentation, and the inverse translate is
computed by dualizing into the opposite quiver.

The pairing couples Ext^1(Y, tau C) with Hom(C, Y) modulo maps that
factor through a projective; the constructor certifies that it descends
and is a perfect pairing (equal dimensions, invertible matrix).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from . import linalg
from .linalg import Subspace, asmod, kernel, matmul
from .quiver import (
    PathBased,
    RepMorphism,
    Representation,
    dual_representation,
    hom_basis,
    hom_coords,
    morphism_factorization,
    morphism_path_coefficients,
    standard_injective,
    zero_morphism,
)
from .ext import ExtClass, ExtSpace, ext_space, min_proj_presentation, pullback_ext, realize_ext, ses_to_class


def nakayama_object(pb: PathBased) -> PathBased:
    """nu P = I on the same summand vertices."""
    if pb.kind != "proj":
        raise ValueError("the Nakayama functor is applied to labeled projectives")
    return standard_injective(pb.quiver, pb.rep.p, pb.summands)


def nakayama_morphism(f: RepMorphism, src: PathBased, tgt: PathBased) -> RepMorphism:
    """nu f between the corresponding labeled injectives.

    A map P(i) -> P(j) given by a path w: j ~> i induces I(i) -> I(j)
    sending the basis path r + w (v ~> i) to r (v ~> j).
    """
    coeffs = morphism_path_coefficients(f, src, tgt)
    nsrc = nakayama_object(src)
    ntgt = nakayama_object(tgt)
    p = f.p
    comps = {}
    for v in f.source.quiver.vertices:
        src_labels = nsrc.labels(v)
        tgt_labels = ntgt.labels(v)
        src_index = {lab: i for i, lab in enumerate(src_labels)}
        m = np.zeros((len(tgt_labels), len(src_labels)), dtype=np.int64)
        for row, (t_idx, r) in enumerate(tgt_labels):
            for s_idx in range(len(src.summands)):
                for w, c in coeffs[(s_idx, t_idx)].items():
                    col = src_index.get((s_idx, r + w))
                    if col is not None:
                        m[row, col] = (m[row, col] + c) % p
        comps[v] = m
    return RepMorphism(nsrc.rep, ntgt.rep, comps)


@dataclass(frozen=True)
class TranslateData:
    """tau X together with its inclusion into nu P1."""

    x: Representation
    translate: Representation
    inclusion: RepMorphism  # tau X -> nu P1
    nu_p1: RepMorphism  # nu P1 -> nu P0


@lru_cache(maxsize=None)
def translate_data(x: Representation) -> TranslateData:
    pres = min_proj_presentation(x)
    nu_p1 = nakayama_morphism(pres.p1, pres.p1_proj, pres.p0_proj)
    fact = morphism_factorization(nu_p1)
    return TranslateData(x, fact.kernel, fact.kernel_inclusion, nu_p1)


def tau(x: Representation) -> Representation:
    """The translate; zero exactly on projectives (minimal presentations)."""
    return translate_data(x).translate


def tau_inverse(x: Representation) -> Representation:
    """The inverse translate, computed on the dual over the opposite quiver."""
    return dual_representation(tau(dual_representation(x)))


def tau_morphism(g: RepMorphism) -> RepMorphism:
    """tau g: tau X -> tau Y for g: X -> Y."""
    x, y = g.source, g.target
    px, py = min_proj_presentation(x), min_proj_presentation(y)
    # lift g to g0: P0(X) -> P0(Y) with p0_Y o g0 = g o p0_X
    basis = hom_basis(px.p0_proj.rep, py.p0_proj.rep)
    cols = np.array(
        [hom_coords(py.p0.compose(h)) for h in basis], dtype=np.int64
    ).T if basis else np.zeros((0, 0), dtype=np.int64)
    rhs = hom_coords(g.compose(px.p0))
    cols = cols.reshape(len(rhs), len(basis))
    sol = linalg.solve(cols, rhs, g.p)
    if sol is None:
        raise AssertionError("lift through a projective cover failed")
    g0 = zero_morphism(px.p0_proj.rep, py.p0_proj.rep)
    for c, h in zip(sol, basis):
        if c:
            g0 = g0.add(h.scale(int(c)))
    # g1 is the unique map with p1_Y o g1 = g0 o p1_X (p1_Y is mono)
    comp = g0.compose(px.p1)
    g1_comps = {}
    for v in x.quiver.vertices:
        a = py.p1.components[v]
        cols_v = []
        for col in comp.components[v].T:
            s = linalg.solve(a, col, g.p)
            if s is None:
                raise AssertionError("restriction to the relation term failed")
            cols_v.append(s)
        g1_comps[v] = (
            np.array(cols_v, dtype=np.int64).T
            if cols_v
            else np.zeros((a.shape[1], 0), dtype=np.int64)
        )
    g1 = RepMorphism(px.p1_proj.rep, py.p1_proj.rep, g1_comps)
    nu_g1 = nakayama_morphism(g1, px.p1_proj, py.p1_proj)
    tx, ty = translate_data(x), translate_data(y)
    # the induced map on kernels: iota_Y o tau g = nu g1 o iota_X
    comps = {}
    for v in x.quiver.vertices:
        target_cols = matmul(nu_g1.components[v], tx.inclusion.components[v], g.p)
        span = Subspace(g.p, ty.inclusion.components[v].shape[0],
                        ty.inclusion.components[v].T)
        comps[v] = np.array(
            [span.coords(col) for col in target_cols.T], dtype=np.int64
        ).T.reshape(ty.translate.dims[v], tx.translate.dims[v])
    return RepMorphism(tx.translate, ty.translate, comps)


# ---------------------------------------------------------------------------
# stable Hom


def projectively_trivial_subspace(c: Representation, y: Representation) -> Subspace:
    """Coordinates (in hom_basis(c, y)) of maps factoring through a projective."""
    pres = min_proj_presentation(y)
    through = [
        hom_coords(pres.p0.compose(g)) for g in hom_basis(c, pres.p0_proj.rep)
    ]
    n = len(hom_basis(c, y))
    return Subspace.from_vectors(
        np.array(through, dtype=np.int64).reshape(len(through), n), n, c.p
    )


class StableHomSpace:
    """Hom(C, Y) modulo maps factoring through a projective."""

    def __init__(self, c: Representation, y: Representation):
        self.c = c
        self.y = y
        self.p = c.p
        self.hom_basis = hom_basis(c, y)
        self.trivial = projectively_trivial_subspace(c, y)
        self.quotient_matrix = self.trivial.quotient_map()
        self.dimension = self.quotient_matrix.shape[0]
        from .quiver import hom_from_coords

        self.basis_reps: Tuple[RepMorphism, ...] = tuple(
            hom_from_coords(c, y, row) for row in self.trivial.quotient_reps()
        )

    def project(self, f: RepMorphism) -> np.ndarray:
        return matmul(self.quotient_matrix, hom_coords(f), self.p)


@lru_cache(maxsize=None)
def stable_hom(c: Representation, y: Representation) -> StableHomSpace:
    return StableHomSpace(c, y)


# ---------------------------------------------------------------------------
# the trace pairing


def trace_functional(c: Representation) -> np.ndarray:
    """The linear functional on Ext^1(C, tau C) coordinates used by the pairing.

    A class is represented by h: P1 -> tau C; composing with the kernel
    inclusion gives psi: P1 -> nu P1, and the functional reads off the
    sum over summands of the coefficient at the trivial-path positions.
    """
    td = translate_data(c)
    pres = min_proj_presentation(c)
    space = ext_space(c, td.translate)
    nu_p1 = nakayama_object(pres.p1_proj)
    out = np.zeros(space.dimension, dtype=np.int64)
    for i, h in enumerate(space.basis_reps):
        psi = td.inclusion.compose(h)
        total = 0
        for s_idx, vtx in enumerate(pres.p1_proj.summands):
            col = pres.p1_proj.label_index(vtx, s_idx, ())
            row = nu_p1.label_index(vtx, s_idx, ())
            total += int(psi.components[vtx][row, col])
        out[i] = total % c.p
    return out


class PairingForm:
    """The perfect pairing between Ext^1(Y, tau C) and stable Hom(C, Y).

    ``matrix[i, j]`` pairs the i-th Ext basis class with the j-th stable
    basis map.  Construction fails hard if the two sides have different
    dimensions, if the form does not kill maps through projectives, or
    if it is degenerate.
    """

    def __init__(self, c: Representation, y: Representation):
        self.c = c
        self.y = y
        self.p = c.p
        self.k = tau(c)
        self.ext = ext_space(y, self.k)
        self.stable = stable_hom(c, y)
        if self.ext.dimension != self.stable.dimension:
            raise AssertionError("Ext and stable Hom dimensions disagree")
        eps = trace_functional(c)
        cspace = ext_space(c, self.k)

        def pair_rep(ses, f: RepMorphism) -> int:
            cls = ses_to_class(pullback_ext(ses, f), cspace)
            return int(matmul(eps, cls.coords, self.p))

        realized = []
        for i in range(self.ext.dimension):
            coords = np.zeros(self.ext.dimension, dtype=np.int64)
            coords[i] = 1
            realized.append(realize_ext(ExtClass(self.ext, coords)))
        self.matrix = np.zeros((self.ext.dimension, self.stable.dimension), dtype=np.int64)
        for i, ses in enumerate(realized):
            for j, f in enumerate(self.stable.basis_reps):
                self.matrix[i, j] = pair_rep(ses, f)
        # descends: maps through projectives pair to zero against everything
        from .quiver import hom_from_coords

        for row in self.stable.trivial.basis:
            f = hom_from_coords(c, y, row)
            for ses in realized:
                if pair_rep(ses, f):
                    raise AssertionError("pairing does not kill maps through projectives")
        if self.ext.dimension and linalg.rank(self.matrix, self.p) != self.ext.dimension:
            raise AssertionError("pairing form is degenerate")

    def pair(self, x: ExtClass, f: RepMorphism) -> int:
        """B[x, f] for x in Ext^1(Y, tau C) and f: C -> Y."""
        if x.space is not self.ext and x.space.dimension != self.ext.dimension:
            raise ValueError("class lives in the wrong Ext space")
        fc = self.stable.project(f)
        return int(x.coords @ self.matrix @ fc % self.p)

    def orthogonal_of_ext(self, l: Subspace) -> Subspace:
        """{stable f : B[x, f] = 0 for all x in L}, in stable coordinates."""
        if l.ambient_dim != self.ext.dimension:
            raise ValueError("subspace lives in the wrong Ext space")
        rows = matmul(l.basis, self.matrix, self.p)
        return Subspace(self.p, self.stable.dimension, kernel(rows, self.p))

    def orthogonal_of_stable(self, m: Subspace) -> Subspace:
        """{x : B[x, f] = 0 for all stable f in M}, in Ext coordinates."""
        if m.ambient_dim != self.stable.dimension:
            raise ValueError("subspace lives in the wrong stable Hom space")
        rows = matmul(m.basis, self.matrix.T, self.p)
        return Subspace(self.p, self.ext.dimension, kernel(rows, self.p))


@lru_cache(maxsize=None)
def ar_pairing(c: Representation, y: Representation) -> PairingForm:
    return PairingForm(c, y)
