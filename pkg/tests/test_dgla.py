import copy
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CATALOG, LIE_VALUED, pipeline
from tensorhierarchy.dgla import (FORMAT_TAG, compare, conjecture_status, cross_checks, dgla_from_json,
                                  dgla_to_json, homology, lie_valued_dgla, status_lines, verify_axioms)
from tensorhierarchy.errors import ParseError
from tensorhierarchy.exactla import rat
from tensorhierarchy.fileformats import dumps


def test_heisenberg_bracket_table_by_hand():
    d = pipeline("heisenberg_leibniz", 4).dgla
    b = d.bracket
    assert b[(-1, 0, -1, 0)] == {0: 2}          # [e, e] = e(x)e + e(x)e
    assert b[(0, 0, -1, 0)] == {1: 1}           # [t, e] = t.e = f
    assert b[(-1, 0, 0, 0)] == {1: -1}
    assert b[(1, 0, -1, 0)] == {0: 1}           # [Theta, e] = Theta(e) = t
    assert b[(-1, 0, 1, 0)] == {0: 1}           # odd-odd: symmetric
    assert b[(1, 0, -2, 0)] == {1: 1}           # [Theta, e.e] = d_-1(e.e) = f
    assert b[(-2, 0, 1, 0)] == {1: -1}
    assert len(b) == 7


@pytest.mark.parametrize("name", CATALOG)
def test_axioms_at_depth_five(name):
    rep = verify_axioms(pipeline(name, 5).dgla)
    assert rep.ok, rep.format()


@pytest.mark.parametrize("name", CATALOG)
def test_cross_checks(name):
    rep = cross_checks(pipeline(name, 4))
    assert rep.ok, rep.format()


@pytest.mark.parametrize("name", LIE_VALUED)
def test_lie_valued_two_routes_agree(name):
    assert compare(pipeline(name, 5, shortcut=False).dgla, lie_valued_dgla(pipeline(name, 5).triple, 5)) == []


def test_compare_reports_differences():
    a = pipeline("crossed_module_aff1", 4).dgla
    b = copy.deepcopy(a)
    b.bracket[(0, 0, 0, 1)] = {0: rat(5)}
    assert any("bracket" in x for x in compare(a, b))


def test_injected_antisymmetry_fault_is_caught_with_witness():
    d = copy.deepcopy(pipeline("heisenberg_leibniz", 4).dgla)
    d.bracket[(0, 0, -1, 0)] = {1: rat(3)}
    rep = verify_axioms(d)
    c = rep.get("graded antisymmetry")
    assert c.status == "FAIL"
    assert "g0@0" in c.witness and "residual" in c.witness


def test_injected_differential_fault_is_caught():
    d = copy.deepcopy(pipeline("jordan_chain_leibniz", 4).dgla)
    d.differential[-1] = d.differential[-1].scale(2)
    rep = verify_axioms(d)
    assert rep.get("[Theta, -] = d").status == "FAIL"
    assert rep.get("Leibniz rule").status == "FAIL"


def test_abelian_skips_theta_check():
    # R_Theta = 0 when Theta = 0
    rep = verify_axioms(pipeline("abelian", 4).dgla)
    assert rep.get("[Theta, -] = d").status == "SKIP"


@pytest.mark.parametrize("name", CATALOG)
def test_json_roundtrip_is_exact(name):
    d = pipeline(name, 4).dgla
    obj = json.loads(dumps(dgla_to_json(d)))
    assert obj["format"] == FORMAT_TAG
    back = dgla_from_json(obj)
    assert compare(d, back) == []
    assert dumps(dgla_to_json(back)) == dumps(dgla_to_json(d))


def test_malformed_hierarchy_file():
    obj = dgla_to_json(pipeline("heisenberg_leibniz", 4).dgla)
    obj["bracket"][0][4] = ["1", "2", "3"]
    with pytest.raises(ParseError):
        dgla_from_json(obj)
    with pytest.raises(ParseError):
        dgla_from_json({"format": "other"})


# homology rows (degree, dim, ker, im, H) worked out from the differentials above
def test_heisenberg_homology():
    rows = [(r.degree, r.dim, r.ker, r.im, r.h) for r in homology(pipeline("heisenberg_leibniz", 4).dgla)]
    assert rows == [(-4, 0, 0, 0, None), (-3, 0, 0, 0, 0), (-2, 1, 0, 0, 0), (-1, 2, 1, 1, 0),
                    (0, 1, 1, 1, 0), (1, 1, 1, 0, 1)]


def test_jordan_chain_homology_is_nonzero_below_minus_two():
    p = pipeline("jordan_chain_leibniz", 6)
    st_ = conjecture_status(p.dgla, p.triple)
    assert st_["h_minus2_zero"] and st_["d_minus1_injective"] and st_["image_is_ideal"]
    assert st_["first_nonzero"] == -3
    assert [r.h for r in homology(p.dgla)][:4] == [None, 1, 1, 1]


def test_nonstringent_status_lines():
    p = pipeline("split_squares_nonstringent", 4)
    lines = status_lines(p.dgla, p.triple)
    assert lines[0] == "H₋₂ = 0: no"
    assert lines[1] == "∂₋₁ injective: no"
    assert lines[2] == "image of ∂₋₁ = ideal of squares: yes"


coef = st.integers(-2, 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["heisenberg_leibniz", "jordan_chain_leibniz", "split_squares_nonstringent"]),
       st.sampled_from([-2, -1, 0, 1]), st.sampled_from([-2, -1, 0, 1]),
       st.lists(coef, min_size=3, max_size=3), st.lists(coef, min_size=3, max_size=3))
def test_bilinear_antisymmetry_and_leibniz(name, dx, dy, a, b):
    d = pipeline(name, 4).dgla
    u = {i: rat(c) for i, c in enumerate(a[:d.dim(dx)]) if c}
    v = {i: rat(c) for i, c in enumerate(b[:d.dim(dy)]) if c}
    s = -1 if (dx * dy) % 2 == 0 else 1
    uv, vu = d.br_vec(dx, u, dy, v), d.br_vec(dy, v, dx, u)
    if uv is None:
        return
    assert uv == {k: s * x for k, x in vu.items()}
    if dx + dy <= 0:
        lhs = d.d_vec(dx + dy, uv)
        r1 = d.br_vec(dx + 1, d.d_vec(dx, u), dy, v) if dx < 1 else {}
        r2 = d.br_vec(dx, u, dy + 1, d.d_vec(dy, v)) if dy < 1 else {}
        sign = 1 if dx % 2 == 0 else -1
        for k, x in r2.items():
            r1[k] = r1.get(k, 0) + sign * x
        assert lhs == {k: x for k, x in r1.items() if x}
