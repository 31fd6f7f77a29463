import pytest
from hypothesis import given, settings, strategies as st

from canonlat import linalg as la
from canonlat.group import fix_codim
from canonlat.lattice import (build_lattice, char_poly, coxeter_element, expected_char_poly,
                              radical, rank_of, signature)
from canonlat.symbol import TUBULAR, Symbol, classify

from _oracles import charpoly as sympy_charpoly, inertia

symbols = st.builds(
    lambda rows, eps: Symbol.make([r[0] for r in rows], [r[1] for r in rows], epsilon=eps),
    st.lists(st.tuples(st.integers(2, 5), st.integers(1, 2)), min_size=1, max_size=4),
    st.integers(1, 2))


def test_basis_order_and_labels():
    lat = build_lattice(Symbol.make((2, 3)))
    assert [b.label for b in lat.basis] == ["a(2,2)", "a(2,1)", "a(1,1)", "a0", "a0*"]
    assert lat.arm(2, 2) == 0 and lat.arm(1, 1) == 2
    with pytest.raises(IndexError):
        lat.arm(1, 2)


def test_a2_gram():
    lat = build_lattice(Symbol.make((2,)))
    assert lat.K == ((1, -1, -1), (0, 1, 2), (0, 0, 1))


def test_signatures():
    assert tuple(signature(build_lattice(Symbol.make((2,))))) == (2, 1, 0)
    assert tuple(signature(build_lattice(Symbol.make((2, 2, 2, 2))))) == (4, 2, 0)
    assert tuple(signature(build_lattice(Symbol.make((2, 3, 7))))) == (9, 1, 1)


@settings(max_examples=40, deadline=None)
@given(symbols)
def test_signature_against_sympy_eigenvalues(s):
    lat = build_lattice(s)
    sig = signature(lat)
    assert (sig.positive, sig.zero, sig.negative) == inertia(lat.B)
    assert sig.zero == len(radical(lat).basis)


@settings(max_examples=40, deadline=None)
@given(symbols)
def test_coxeter_identity_and_char_poly(s):
    lat = build_lattice(s)
    c = coxeter_element(lat)
    for x in lat.simple_roots():
        for y in lat.simple_roots():
            assert lat.euler(x, y) + lat.euler(y, c.apply(x)) == 0
    assert c.is_isometry()
    oracle = sympy_charpoly(c.mat)
    assert list(char_poly(c)) == oracle == list(expected_char_poly(s))
    assert fix_codim(c) == lat.n - radical(lat).rank


@settings(max_examples=40, deadline=None)
@given(symbols)
def test_radical(s):
    lat = build_lattice(s)
    rad = radical(lat)
    assert la.is_zero([la.matvec(lat.B, rad.a)])
    assert rank_of(lat, lat.a) == 0
    tub = classify(s).klass == TUBULAR
    assert rad.rank == (2 if tub else 1)
    assert (rad.b is not None) == tub


def test_simple_roots_are_pseudo_roots(any_lattice):
    assert all(any_lattice.is_pseudo_root(v) for v in any_lattice.simple_roots())
    assert not any_lattice.is_pseudo_root(any_lattice.a)
