import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import a2_quiver, a3_quiver, interval
from quiverrep.quiver import (
    DecompositionCapError,
    Quiver,
    RepMorphism,
    Representation,
    decompose,
    direct_sum,
    dual_representation,
    hom_basis,
    hom_coords,
    hom_from_coords,
    identity_morphism,
    in_add,
    is_injective,
    is_isomorphic,
    is_projective,
    iso_multiset,
    morphism_factorization,
    projective_cover,
    simple,
    standard_objects,
    zero_morphism,
)


def test_quiver_rejects_cycles_and_duplicates():
    with pytest.raises(ValueError, match="acyclicity violated"):
        Quiver(("1", "2"), (("a", "1", "2"), ("b", "2", "1")))
    with pytest.raises(ValueError):
        Quiver(("1", "1"), ())
    with pytest.raises(ValueError):
        Quiver(("1", "2"), (("a", "1", "2"), ("a", "2", "1")))
    with pytest.raises(ValueError):
        Quiver(("1",), (("a", "1", "9"),))


def test_representation_validates_shapes(a2):
    with pytest.raises(ValueError):
        Representation(a2, 2, {"1": 2, "2": 1}, {"a": np.zeros((2, 2))})
    with pytest.raises(ValueError):
        Representation(a2, 2, {"1": -1}, {})


def test_morphism_requires_commuting_squares(a2_objects):
    p1, _, s1, _, _, s2 = a2_objects
    with pytest.raises(ValueError):
        RepMorphism(p1.rep, p1.rep, {"1": np.array([[1]]), "2": np.array([[0]])})


def test_a2_hom_dimensions(a2_objects):
    p1, _, s1, _, _, s2 = a2_objects
    assert len(hom_basis(p1.rep, s1)) == 1
    assert len(hom_basis(s1, p1.rep)) == 0
    assert len(hom_basis(s2, p1.rep)) == 1
    assert len(hom_basis(p1.rep, p1.rep)) == 1


def test_hom_coords_round_trip(a2_objects):
    p1, _, s1, _, _, _ = a2_objects
    for f in hom_basis(p1.rep, p1.rep):
        again = hom_from_coords(p1.rep, p1.rep, hom_coords(f))
        assert again == f


def test_standard_objects_a2(a2):
    p2, i2, s2 = standard_objects(a2, 2, "2")
    p1, i1, s1 = standard_objects(a2, 2, "1")
    assert is_isomorphic(p2.rep, s2)
    assert is_isomorphic(i1.rep, s1)
    assert is_isomorphic(i2.rep, p1.rep)
    assert is_projective(p1.rep) and is_projective(s2)
    assert is_injective(s1) and is_injective(p1.rep)
    assert not is_projective(s1)
    assert not is_injective(s2)


def test_projective_cover_of_simple(a2):
    s1 = simple(a2, 2, "1")
    proj, pi = projective_cover(s1)
    assert proj.summands == ("1",)
    assert pi.is_epi()
    fact = morphism_factorization(pi)
    assert is_isomorphic(fact.kernel, simple(a2, 2, "2"))


def test_factorization_reassembles(a3):
    x = interval(a3, 3, 1, 3)
    y = interval(a3, 3, 1, 2)
    # the truncation map [1,3] -> [1,2]
    f = RepMorphism(x, y, {"1": np.array([[1]]), "2": np.array([[1]]),
                           "3": np.zeros((0, 1))})
    fact = morphism_factorization(f)
    assert is_isomorphic(fact.kernel, interval(a3, 3, 3, 3))
    assert is_isomorphic(fact.image, y)
    assert fact.cokernel.total_dim == 0


def test_direct_sum_identities(a2_objects):
    p1, _, s1, _, _, s2 = a2_objects
    total, injs, projs = direct_sum([p1.rep, s1, s2])
    assert total.total_dim == 4
    acc = None
    for inj, proj in zip(injs, projs):
        assert proj.compose(inj) == identity_morphism(inj.source)
        term = inj.compose(proj)
        acc = term if acc is None else acc.add(term)
    assert acc == identity_morphism(total)


def test_decompose_recovers_summands(a2_objects):
    p1, _, s1, _, _, s2 = a2_objects
    total, _, _ = direct_sum([p1.rep, s2, s1, s1])
    mult = {tuple(sorted(part.dims.items())): m for part, m in iso_multiset(total)}
    assert mult[(("1", 0), ("2", 1))] == 1
    assert mult[(("1", 1), ("2", 0))] == 2
    assert mult[(("1", 1), ("2", 1))] == 1


def test_in_add(a2_objects):
    p1, _, s1, _, _, s2 = a2_objects
    both, _, _ = direct_sum([s1, s2])
    assert in_add(s1, both)
    assert not in_add(p1.rep, both)
    assert in_add(both, both)
    # stripping projectives discards the P1 summand
    withp, _, _ = direct_sum([p1.rep, s1])
    assert in_add(withp, s1, strip_projectives=True)


def test_dual_is_an_involution(a3):
    x = interval(a3, 5, 1, 2)
    back = dual_representation(dual_representation(x))
    assert back == x


def test_indecomposable_certification(a2):
    p1, _, _ = standard_objects(a2, 2, "1")
    assert len(decompose(p1.rep)) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2), st.integers(0, 2), st.sampled_from((2, 3)))
def test_morphism_algebra(d1, d2, p):
    quiver = a2_quiver()
    x = Representation(quiver, p, {"1": d1, "2": d2},
                       {"a": np.zeros((d2, d1), dtype=np.int64)})
    basis = hom_basis(x, x)
    ident = identity_morphism(x)
    for f in basis:
        assert f.compose(ident) == f
        assert ident.compose(f) == f
        assert f.add(f.negate()) == zero_morphism(x, x)


def test_apply_path(a3):
    x = interval(a3, 2, 1, 3)
    m = x.apply_path("1", ("a", "b"))
    assert m.shape == (1, 1) and m[0, 0] == 1
    with pytest.raises(ValueError):
        x.apply_path("2", ("a",))
