import copy

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CATALOG, triple
from tensorhierarchy import catalog
from tensorhierarchy.errors import (ActionNotMorphism, DimensionMismatch, LieAlgebraInvalid, ParseError,
                                    ProductMismatch, QuadraticConstraintViolation)
from tensorhierarchy.exactla import RatMatrix, rat
from tensorhierarchy.fileformats import triple_from_dict, triple_to_dict
from tensorhierarchy.triple import (center, eta, flatten_hom, ideal_of_squares, ker_theta, orbit_closure,
                                    r_theta)

# (lie_V, strict, semistrict, stringent, crossed), dim I, dim Z, dim Ker Theta, dim R_Theta, dim Ker{,}
# worked out by hand from the structure constants
EXPECTED = {
    "abelian": ((True, True, True, True, True), 0, 1, 1, 0, 1),
    "crossed_module_aff1": ((True, True, True, True, True), 0, 0, 0, 1, 3),
    "heisenberg_leibniz": ((False, True, True, True, False), 1, 1, 1, 1, 2),
    "sl2_adjoint_crossed": ((True, True, True, True, True), 0, 0, 0, 1, 6),
    "jordan_chain_leibniz": ((False, True, True, True, False), 2, 2, 2, 1, 4),
    "split_squares_nonstringent": ((False, False, False, False, False), 1, 1, 1, 2, 5),
}


@pytest.mark.parametrize("name", CATALOG)
def test_structure_invariants_match_hand_values(name):
    t = triple(name)
    flags, dI, dZ, dK, dR, dS = EXPECTED[name]
    assert tuple(t.flags.as_dict().values()) == flags
    assert (ideal_of_squares(t).dim, center(t).dim, ker_theta(t).dim, r_theta(t).dim, t.ker_sym().dim) == \
        (dI, dZ, dK, dR, dS)


def test_heisenberg_product():
    t = triple("heisenberg_leibniz")
    e, f = (1, 0), (0, 1)
    assert t.product(e, e) == (0, 1)
    assert t.product(e, f) == t.product(f, e) == t.product(f, f) == (0, 0)


def test_roundtrip_through_dict():
    for name in CATALOG:
        t = triple(name)
        t2 = triple_from_dict(triple_to_dict(t), name)
        assert t2.leib == t.leib and t2.theta == t.theta


def _mutate(name, fn):
    d = copy.deepcopy(catalog.get(name))
    fn(d)
    return d


def test_rejects_non_lie_bracket():
    def bad(d):
        d["g"]["brackets"][0][0][0] = "1"
    with pytest.raises(LieAlgebraInvalid):
        triple_from_dict(_mutate("abelian", bad))


def test_rejects_action_that_is_not_a_morphism():
    def bad(d):
        d["rho"][0] = [["0", "0"], ["0", "0"]]
        d["rho"][1] = [["1", "0"], ["0", "1"]]
        d["theta"] = [["0", "0"], ["0", "0"]]
    with pytest.raises(ActionNotMorphism):
        triple_from_dict(_mutate("crossed_module_aff1", bad))


def test_rejects_quadratic_constraint_failure():
    def bad(d):
        d["rho"] = [[["1"]]]
        d["theta"] = [["1"]]
    with pytest.raises(QuadraticConstraintViolation):
        triple_from_dict(_mutate("abelian", bad))


def test_rejects_inconsistent_leibniz_product():
    d = catalog.get("heisenberg_leibniz")
    d["leibniz"] = [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]]
    with pytest.raises(ProductMismatch):
        triple_from_dict(d)
    d["leibniz"] = [[["0", "1"], ["0", "0"]], [["0", "0"], ["0", "0"]]]
    assert triple_from_dict(d).leib == triple("heisenberg_leibniz").leib


def test_parse_errors_carry_location():
    d = catalog.get("heisenberg_leibniz")
    d["theta"] = [["1/0", "0"]]
    with pytest.raises(ParseError) as e:
        triple_from_dict(d, "h.json")
    assert "theta" in str(e.value)
    d = catalog.get("heisenberg_leibniz")
    d["rho"] = []
    with pytest.raises(ParseError):
        triple_from_dict(d)


def test_shape_mismatch_is_reported():
    d = catalog.get("heisenberg_leibniz")
    d["theta"] = [["1", "0", "0"]]
    with pytest.raises((ParseError, DimensionMismatch)):
        triple_from_dict(d)


def test_eta_vanishes_on_heisenberg_theta():
    t = triple("heisenberg_leibniz")
    assert eta(t, (1,), t.theta).is_zero()


def test_r_theta_sl2_is_spanned_by_theta():
    # Theta = id is equivariant, so eta(a; Theta) = 0
    t = triple("sl2_adjoint_crossed")
    R = r_theta(t)
    assert R.dim == 1 and tuple(R.words) == ((),)


def test_orbit_closure_of_nilpotent_chain():
    n = RatMatrix.from_rows([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    cyc = orbit_closure((1, 0, 0), [n])
    assert cyc.dim == 3
    assert cyc.coords((0, 0, 1)) is not None
    assert orbit_closure((0, 0, 1), [n]).coords((1, 0, 0)) is None


def test_hom_action_is_a_representation():
    for name in CATALOG:
        t = triple(name)
        assert t.hom_action().morphism_failures(t.g) == []
        assert t.s2_action().morphism_failures(t.g) == []


coeffs = st.lists(st.integers(-4, 4), min_size=3, max_size=3)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(CATALOG), coeffs, coeffs, coeffs)
def test_leibniz_identity_and_squares(name, a, b, c):
    t = triple(name)
    n = t.dimV
    x, y, z = (tuple(rat(v) for v in w[:n]) for w in (a, b, c))
    add = lambda u, v: tuple(p + q for p, q in zip(u, v))  # noqa: E731
    assert t.product(x, t.product(y, z)) == add(t.product(t.product(x, y), z), t.product(y, t.product(x, z)))
    sq = t.product(x, x)
    assert ideal_of_squares(t).contains(sq)
    assert not any(t.theta_of(sq))
    assert center(t).contains(sq)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CATALOG), coeffs)
def test_theta_intertwines_product_and_bracket(name, a):
    t = triple(name)
    x = tuple(rat(v) for v in a[:t.dimV])
    for i in range(t.dimV):
        e = tuple(rat(1 if k == i else 0) for k in range(t.dimV))
        assert t.theta_of(t.product(x, e)) == t.g.bracket(t.theta_of(x), t.theta_of(e))
    assert len(flatten_hom(t.theta)) == t.g.dim * t.dimV
