import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CATALOG, pipeline
from tensorhierarchy.differential import m_matrix, verify_differential, verify_mu
from tensorhierarchy.exactla import RatMatrix, image, rat
from tensorhierarchy.freegla import bracket_matrix, wedge2
from tensorhierarchy.triple import ideal_of_squares


def _rows(m):
    return [[int(x) if x.denominator == 1 else x for x in r] for r in m.to_lists()]


@pytest.mark.parametrize("name", CATALOG)
def test_differential_checks_pass(name):
    p = pipeline(name, 5)
    rep = verify_differential(p.hierarchy, p.tower, p.mu)
    assert rep.ok, rep.format()


@pytest.mark.parametrize("name", CATALOG)
def test_mu_certificates_pass(name):
    p = pipeline(name, 5)
    rep = verify_mu(p.hierarchy, p.tower, p.mu)
    assert rep.ok, rep.format()


@pytest.mark.parametrize("name", CATALOG)
def test_d_squared_vanishes(name):
    part = pipeline(name, 5).tower.partial
    for s in range(-3, 2):
        assert (part[s] @ part[s - 1]).is_zero()


def test_heisenberg_hand_values():
    # T_-2 is spanned by e.e, and d_-1(e.e) = {e, e} = e o e = f
    part = pipeline("heisenberg_leibniz", 4).tower.partial
    assert _rows(part[0]) == [[1, 0]]
    assert _rows(part[-1]) == [[0], [1]]
    assert _rows(part[1]) == [[0]]


def test_jordan_chain_hand_values():
    # basis of T_-2: e.e and e(x)f1 + f1(x)e = 2 e.f1; {e,e} = f1, 2{e,f1} = f2
    part = pipeline("jordan_chain_leibniz", 5).tower.partial
    assert _rows(part[-1]) == [[0, 0], [1, 0], [0, 1]]
    # the tower continues below -2 but d_-2 and d_-3 vanish
    assert part[-2].is_zero() and part[-3].is_zero()


def test_crossed_module_d_is_theta():
    p = pipeline("crossed_module_aff1", 4)
    assert p.tower.partial[0] == RatMatrix.identity(2)


@pytest.mark.parametrize("name", CATALOG)
def test_image_of_d_minus_one_is_ideal_of_squares(name):
    p = pipeline(name, 4)
    assert image(p.tower.partial[-1]) == ideal_of_squares(p.triple)


@pytest.mark.parametrize("name", ["heisenberg_leibniz", "jordan_chain_leibniz"])
def test_m_at_level_two_is_d_of_bracket(name):
    p = pipeline(name, 4)
    q = p.hierarchy.q
    # d vanishes on T_-1, so d q = m there
    assert m_matrix(p.hierarchy, 2) == p.tower.partial[-1] @ bracket_matrix(q, wedge2(q.dims, 2))


vec3 = st.lists(st.integers(-4, 4), min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CATALOG), vec3, vec3)
def test_d_of_bracket_is_symmetrized_product(name, a, b):
    p = pipeline(name, 4)
    t, q = p.triple, p.hierarchy.q
    x = {i: rat(v) for i, v in enumerate(a[:t.dimV]) if v}
    y = {i: rat(v) for i, v in enumerate(b[:t.dimV]) if v}
    got = p.tower.partial[-1].apply_sparse(q.bracket_vec(1, x, 1, y))
    xd = [x.get(i, 0) for i in range(t.dimV)]
    yd = [y.get(i, 0) for i in range(t.dimV)]
    want = [u + v for u, v in zip(t.product(xd, yd), t.product(yd, xd))]
    assert got == {i: c for i, c in enumerate(want) if c}
