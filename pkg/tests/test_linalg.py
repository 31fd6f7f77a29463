from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from canonlat import linalg as la

from _oracles import inertia

small = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(square))
def test_det_rank_charpoly_against_sympy(rows):
    M = sympy.Matrix(rows)
    assert la.det(rows) == M.det()
    assert la.rank(rows) == M.rank()
    x = sympy.Symbol("x")
    assert list(la.char_poly(rows)) == [int(c) for c in M.charpoly(x).all_coeffs()]


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(square))
def test_inverse_and_nullspace(rows):
    n = len(rows)
    if la.det(rows) != 0:
        assert la.matmul(rows, la.inverse(rows)) == la.identity(n)
    for v in la.nullspace(rows):
        assert la.is_zero([la.matvec(rows, v)])
    assert len(la.nullspace(rows)) == n - la.rank(rows)


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(square))
def test_congruence_diagonal_matches_inertia(rows):
    n = len(rows)
    sym = [[rows[i][j] + rows[j][i] for j in range(n)] for i in range(n)]
    d, P = la.congruence_diagonal(sym)
    D = la.matmul(la.matmul(P, sym), la.transpose(P))
    assert all(D[i][j] == (d[i] if i == j else 0) for i in range(n) for j in range(n))
    pos, zero, neg = inertia(sym)
    assert (sum(x > 0 for x in d), sum(x == 0 for x in d), sum(x < 0 for x in d)) == (pos, zero, neg)


def test_hermite_rows_is_span_invariant():
    a = la.hermite_rows([(1, 2, 3), (0, 1, 1)])
    b = la.hermite_rows([(1, 3, 4), (1, 2, 3)])
    assert a == b


def test_fmt_number():
    assert la.fmt_number(Fraction(-3, 2)) == "-3/2"
    assert la.fmt_number(Fraction(4, 2)) == "2"
