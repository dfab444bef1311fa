import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import free_dims_bruteforce, free_dims_formula, wedge2_dim
from tensorhierarchy.exactla import RatMatrix, rank, rat
from tensorhierarchy.freegla import (FreeAlgebra, TensorElem, bracket_extension, bracket_matrix,
                                     canonical_wedge, ce_d2, ce_d3, graded_bracket, jacobi_failures, koszul,
                                     tensor_action, wedge2, wedge3)
from tensorhierarchy.hierarchy import check_exactness


def test_koszul_signs():
    assert koszul(1, 1) == -1
    assert koszul(1, 2) == koszul(2, 2) == 1


def test_small_free_dims():
    assert FreeAlgebra(1).dims(4) == {1: 1, 2: 1, 3: 0, 4: 0}
    assert FreeAlgebra(2).dims(3) == {1: 2, 2: 3, 3: 2}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_dims_match_bruteforce(n):
    got = FreeAlgebra(n).dims(5)
    assert [got[i] for i in range(1, 6)] == free_dims_bruteforce(n, 5)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_free_dims_match_superalgebra_formula(n):
    depth = 6 if n <= 3 else 4
    got = FreeAlgebra(n).dims(depth)
    assert [got[i] for i in range(1, depth + 1)] == free_dims_formula(n, depth)


def test_bracket_of_generators_is_symmetric():
    x, y = TensorElem.generator(2, 0), TensorElem.generator(2, 1)
    assert graded_bracket(x, y) == graded_bracket(y, x)
    # [x, x] = 2 x(x)x for odd x
    assert graded_bracket(x, x).terms == {0: rat(2)}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_wedge_dims(n):
    dims = FreeAlgebra(n).dims(6)
    for i in range(2, 7):
        assert wedge2(dims, i).dim == wedge2_dim(dims, i)


def test_canonical_wedge_rules():
    assert canonical_wedge([(1, 0), (1, 0)]) == (1, ((1, 0), (1, 0)))
    assert canonical_wedge([(2, 0), (2, 0)]) is None
    assert canonical_wedge([(2, 1), (1, 0)]) == (-1, ((1, 0), (2, 1)))
    assert canonical_wedge([(1, 1), (1, 0)]) == (1, ((1, 0), (1, 1)))


factors = st.tuples(st.integers(1, 4), st.integers(0, 2))


@settings(max_examples=100, deadline=None)
@given(factors, factors, factors)
def test_transposition_sign(x, y, z):
    a, b = canonical_wedge([x, y, z]), canonical_wedge([y, x, z])
    if a is None:
        assert b is None
    else:
        assert b[1] == a[1] and b[0] == -koszul(x[0], y[0]) * a[0]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_exactness_and_jacobi(n):
    L = FreeAlgebra(n).graded_lie(6)
    bad, count = jacobi_failures(L)
    assert not bad and count > 0
    for i in range(2, 7):
        assert rank(bracket_matrix(L, wedge2(L.dims, i))) == L.dim(i)
    for i in range(3, 7):
        ok, r2, r3, d2 = check_exactness(L, i)
        assert ok and r2 + r3 == d2


def test_chevalley_eilenberg_composite_vanishes():
    L = FreeAlgebra(2).graded_lie(5)
    for i in range(3, 6):
        assert (ce_d2(L, i) @ ce_d3(L, i)).is_zero()
        assert ce_d3(L, i) == -bracket_extension(L, i)
    assert wedge3(L.dims, 3).dim == 4


def test_action_extends_as_derivation():
    m = RatMatrix.from_rows([[0, 0], [1, 0]])
    x, y = TensorElem.generator(2, 0), TensorElem.generator(2, 1)
    lhs = tensor_action(m, graded_bracket(x, y))
    rhs = graded_bracket(tensor_action(m, x), y) + graded_bracket(x, tensor_action(m, y))
    assert lhs == rhs


def test_level_actions_are_representations():
    # sl2 on its adjoint module, extended to every free level
    from tensorhierarchy.triple import LieAlgebra
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j, k, v) in [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]:
        c[i][j][k], c[j][i][k] = v, -v
    g = LieAlgebra(3, c)
    free = FreeAlgebra(3, g.ad_basis())
    for i in range(1, 5):
        assert free.level(i).g_action.morphism_failures(g) == []


coeff = st.integers(-3, 3)


@settings(max_examples=40, deadline=None)
@given(st.lists(coeff, min_size=3, max_size=3), st.lists(coeff, min_size=6, max_size=6),
       st.lists(coeff, min_size=3, max_size=3))
def test_free_bracket_graded_properties(a, b, c):
    fa = FreeAlgebra(3)
    lv1, lv2 = fa.level(1), fa.level(2)
    x = lv1.tensor({i: rat(v) for i, v in enumerate(a) if v})
    y = lv2.tensor({i: rat(v) for i, v in enumerate(b) if v})
    z = lv1.tensor({i: rat(v) for i, v in enumerate(c) if v})
    if x.terms and y.terms:
        assert graded_bracket(x, y) == graded_bracket(y, x).scale(-koszul(1, 2))
    if x.terms and y.terms and z.terms:
        lhs = graded_bracket(x, graded_bracket(y, z))
        rhs = graded_bracket(graded_bracket(x, y), z) + graded_bracket(y, graded_bracket(x, z)).scale(koszul(1, 2))
        assert lhs == rhs
