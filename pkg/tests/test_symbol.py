from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from canonlat.errors import InvalidSymbol, MalformedInput
from canonlat.symbol import (DOMESTIC, TUBULAR, WILD, Symbol, TUBULAR_EPS1, TUBULAR_EPS2,
                             ascii_name, classify, delta, domestic_rows, epsilon_one_equivalent,
                             parse_symbol, reduce)


def test_parse_roundtrip_and_defaults():
    s = parse_symbol('{"t":1,"epsilon":1,"p":[2],"d":[1],"f":[1]}')
    assert s == Symbol.make((2,))
    assert s.kappa == 1 and s.n == 3
    assert parse_symbol(b'{"t":2,"epsilon":1,"p":[2,2],"d":[1,1],"f":[1,1],"kappa":3}').kappa == 3


@pytest.mark.parametrize("text", ["[]", "{", '{"t":1}', '{"t":1,"epsilon":1,"p":[2],"d":[1],"f":[1],"x":0}',
                                  '{"t":1,"epsilon":true,"p":[2],"d":[1],"f":[1]}',
                                  '{"t":1,"epsilon":1,"p":2,"d":[1],"f":[1]}'])
def test_malformed(text):
    with pytest.raises(MalformedInput):
        parse_symbol(text)


@pytest.mark.parametrize("doc", [
    '{"t":2,"epsilon":1,"p":[2],"d":[1],"f":[1]}',
    '{"t":1,"epsilon":3,"p":[2],"d":[1],"f":[1]}',
    '{"t":1,"epsilon":1,"p":[1],"d":[1],"f":[1]}',
    '{"t":1,"epsilon":1,"p":[2],"d":[3],"f":[2]}',
    '{"t":1,"epsilon":1,"p":[2],"d":[4],"f":[1],"kappa":1}',
])
def test_invalid(doc):
    with pytest.raises(InvalidSymbol):
        parse_symbol(doc)


def test_delta_values():
    assert delta(Symbol.make((2,))) == Fraction(-3, 2)
    assert delta(Symbol.make((2, 2, 2, 2))) == 0
    assert delta(Symbol.make((2, 3, 7))) == Fraction(1, 42)


@given(st.lists(st.integers(2, 9), min_size=1, max_size=5), st.integers(1, 2))
def test_class_matches_delta_sign(ps, eps):
    s = Symbol.make(ps, epsilon=eps)
    info = classify(s)
    expected = DOMESTIC if info.delta < 0 else TUBULAR if info.delta == 0 else WILD
    assert info.klass == expected
    assert info.n == sum(p - 1 for p in ps) + 2


@given(st.lists(st.tuples(st.integers(2, 7), st.integers(1, 3)), min_size=1, max_size=4))
def test_epsilon_one_equivalent_keeps_reduced_symbol(rows):
    p = [r[0] for r in rows]
    d = [r[1] for r in rows]
    s = Symbol.make(p, d, epsilon=2)
    s1 = epsilon_one_equivalent(s)
    assert s1.epsilon == 1
    assert reduce(s1) == reduce(s)
    assert delta(s1) == delta(s)


def test_dictionary_rows_classify():
    for row in domestic_rows(5) + TUBULAR_EPS1 + TUBULAR_EPS2:
        info = classify(row.symbol())
        assert info.klass == row.expected_class
        assert row.name in info.aliases or info.dynkin_name == row.name


def test_ascii_name():
    assert ascii_name(classify(Symbol.make((2,))).dynkin_name) == "A~2"
    assert classify(Symbol.make((2, 3, 7))).dynkin_name is None
