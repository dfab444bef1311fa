import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pipeline, triple
from tensorhierarchy.errors import DimensionMismatch, KernelNotPreserved, MorphismInvalid
from tensorhierarchy.exactla import RatMatrix
from tensorhierarchy.functor import (TripleMorphism, check_morphism, functor_laws, identity_morphism, induce,
                                     is_identity, validate_morphism)

N = 4


def M(rows):
    return RatMatrix.from_rows(rows)


def heis_scale(lam):
    return TripleMorphism(M([[lam]]), M([[lam, 0], [0, lam ** 2]]))


def jordan_scale(lam):
    return TripleMorphism(M([[lam]]), M([[lam, 0, 0], [0, lam ** 2, 0], [0, 0, lam ** 3]]))


# e -> e, f1 -> f, f2 -> 0 and t -> t
JORDAN_TO_HEIS = TripleMorphism(M([[1]]), M([[1, 0, 0], [0, 1, 0]]))
# the abelian generator goes to the square f, g goes to zero
ABELIAN_TO_HEIS = TripleMorphism(M([[0]]), M([[0], [1]]))


def _p(name):
    return pipeline(name, N)


def test_scaling_maps_by_hand():
    f = induce(_p("heisenberg_leibniz"), _p("heisenberg_leibniz"), heis_scale(2))
    assert f.maps[-1] == M([[2, 0], [0, 4]])
    assert f.maps[0] == M([[2]])
    assert f.maps[-2] == M([[4]])      # e.e -> 4 e.e
    assert f.maps[1] == M([[1]])       # Theta -> Theta' of phi(word) = Theta
    g = induce(_p("jordan_chain_leibniz"), _p("jordan_chain_leibniz"), jordan_scale(2))
    assert g.maps[-2] == M([[4, 0], [0, 8]])
    assert g.maps[-3] == M([[16]]) and g.maps[-4] == M([[32]])


def test_projection_by_hand():
    f = induce(_p("jordan_chain_leibniz"), _p("heisenberg_leibniz"), JORDAN_TO_HEIS)
    # e(x)f1 + f1(x)e goes to 2 e.f, which lies in the kernel of the symmetric product
    assert f.maps[-2] == M([[1, 0]])
    assert f.maps[-3].is_zero() and f.maps[-3].shape == (0, 1)


def test_identity_goes_to_identity():
    for name in ("heisenberg_leibniz", "jordan_chain_leibniz", "sl2_adjoint_crossed"):
        p = _p(name)
        assert is_identity(induce(p, p, identity_morphism(p.triple)))


def test_functor_laws_over_sample_morphisms():
    objects = {n: _p(n) for n in ("abelian", "heisenberg_leibniz", "jordan_chain_leibniz")}
    arrows = [
        ("heisenberg_leibniz", "heisenberg_leibniz", heis_scale(2)),
        ("heisenberg_leibniz", "heisenberg_leibniz", heis_scale(3)),
        ("jordan_chain_leibniz", "jordan_chain_leibniz", jordan_scale(2)),
        ("jordan_chain_leibniz", "heisenberg_leibniz", JORDAN_TO_HEIS),
        ("abelian", "heisenberg_leibniz", ABELIAN_TO_HEIS),
    ]
    rep = functor_laws(objects, arrows)
    assert rep.ok, rep.format()
    assert rep.get("composable pairs exercised").checked >= 5


def test_scaling_composition():
    p = _p("heisenberg_leibniz")
    g2, g3, g6 = (induce(p, p, heis_scale(k)) for k in (2, 3, 6))
    assert g3.compose_after(g2) == g6


def test_invalid_morphism_rejected():
    bad = TripleMorphism(M([[1]]), M([[1, 0], [0, 2]]))
    rep = validate_morphism(triple("heisenberg_leibniz"), triple("heisenberg_leibniz"), bad)
    assert not rep.ok
    assert rep.get("chi preserves the Leibniz product").status == "FAIL"
    with pytest.raises(MorphismInvalid):
        induce(_p("heisenberg_leibniz"), _p("heisenberg_leibniz"), bad)


def test_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        validate_morphism(triple("heisenberg_leibniz"), triple("abelian"), heis_scale(1))


def test_nonstringent_target_is_refused():
    m = TripleMorphism(M([[0], [1], [0]]), M([[1, 0], [0, 0], [0, 1]]))
    assert validate_morphism(triple("heisenberg_leibniz"), triple("split_squares_nonstringent"), m).ok
    with pytest.raises(KernelNotPreserved):
        induce(_p("heisenberg_leibniz"), _p("split_squares_nonstringent"), m)


@settings(max_examples=15, deadline=None)
@given(st.integers(-4, 4).filter(bool), st.integers(-4, 4).filter(bool))
def test_scaling_family_is_functorial(a, b):
    p = _p("jordan_chain_leibniz")
    ga, gb, gab = (induce(p, p, jordan_scale(k)) for k in (a, b, a * b))
    assert gb.compose_after(ga) == gab
    assert check_morphism(ga, p.dgla, p.dgla).ok
    # [e e f1] has weight 1 + 1 + 2
    assert ga.maps[-3] == M([[a ** 4]])
