from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tensorhierarchy.errors import FactorizationFailure, ParseError
from tensorhierarchy.exactla import (RatMatrix, Subspace, factor_through, image, intersect, inverse, kernel,
                                     quotient, rank, rat, rat_str)

small = st.integers(-3, 3)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def to_sympy(rows):
    return sympy.Matrix(rows)


def test_rat_parsing():
    assert rat("3/6") == rat("1/2")
    assert rat_str(rat("-4/2")) == "-2"
    assert rat_str(rat("-2/6")) == "-1/3"
    for bad in ("1/0", "x", "1.5e", "", "2/-6"):
        with pytest.raises(ParseError):
            rat(bad)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(RatMatrix.from_rows(rows)) == to_sympy(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    m = RatMatrix.from_rows(rows)
    k = kernel(m)
    assert k.dim + rank(m) == m.cols
    for v in k.vectors():
        assert not any(m.apply(v))
    assert image(m).dim == rank(m)


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4), matrices(4, 4))
def test_intersection_dimension(a, b):
    n = 4
    va = [r + [0] * (n - len(r)) for r in a]
    vb = [r + [0] * (n - len(r)) for r in b]
    A, B = Subspace.from_vectors(n, va), Subspace.from_vectors(n, vb)
    S = Subspace.from_vectors(n, va + vb)
    assert intersect(A, B).dim == A.dim + B.dim - S.dim


@settings(max_examples=40, deadline=None)
@given(matrices(5, 5))
def test_quotient_section_and_projection(rows):
    n = len(rows[0])
    K = Subspace.from_vectors(n, rows)
    Q = quotient(n, K)
    assert Q.dim == n - K.dim
    for i in range(Q.dim):
        c = {i: rat(1)}
        assert Q.project_sparse(Q.section_sparse(c)) == c
    for v in K.sparse_basis():
        assert Q.project_sparse(v) == {}


@settings(max_examples=40, deadline=None)
@given(matrices(4, 5), matrices(3, 4))
def test_factor_through_recovers_composite(qrows, drows):
    Q = RatMatrix.from_rows(qrows)
    assume(rank(Q) == Q.rows)
    # pad D so that D @ Q is defined
    D = RatMatrix.from_rows([(r + [0] * Q.rows)[:Q.rows] for r in drows])
    J = D @ Q
    D2 = factor_through(J, Q)
    assert D2 @ Q == J


def test_factor_through_rejects_non_factoring_map():
    Q = RatMatrix.from_rows([[1, 1]])
    J = RatMatrix.from_rows([[1, 0]])
    with pytest.raises(FactorizationFailure):
        factor_through(J, Q)


def test_inverse_against_fractions():
    m = RatMatrix.from_rows([[2, 1], [7, 4]])
    assert inverse(m) == RatMatrix.from_rows([[4, -1], [-7, 2]])
    inv = to_sympy([[1, 2, 0], [0, 1, 3], [4, 0, 1]]).inv()
    got = inverse(RatMatrix.from_rows([[1, 2, 0], [0, 1, 3], [4, 0, 1]]))
    assert [[Fraction(str(x)) for x in r] for r in got.to_lists()] == \
        [[Fraction(str(inv[i, j])) for j in range(3)] for i in range(3)]


def test_subspace_membership_and_coords():
    S = Subspace.from_vectors(3, [[1, 1, 0], [0, 1, 1]])
    assert S.contains([1, 2, 1])
    assert not S.contains([1, 0, 0])
    c = S.coords([1, 2, 1])
    assert S.lift(c) == tuple(rat(x) for x in (1, 2, 1))
