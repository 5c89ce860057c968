from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weylkit import Poly, normal_order
from weylkit.coeffs import format_coeff
from weylkit.parser import (
    MAX_EXPONENT, Let, Num, ParseError, Pow, Prod, Sum, Sym, max_mode, parse_expression, parse_operator,
    symbols_of, to_coefficient,
)
from weylkit.weyl import Kind, OperatorPolynomial


def test_product_of_power():
    assert parse_expression("X^2*D") == Prod((Pow(Let(Kind.RAISE, 0), 2), Let(Kind.LOWER, 0)))


def test_power_of_sum():
    assert parse_expression("(X+D)^2") == Pow(Sum((Let(Kind.RAISE, 0), Let(Kind.LOWER, 0))), 2)


def test_symbols_become_parameters():
    node = parse_expression("a*X + b*D")
    assert symbols_of(node) == {"a", "b"}
    a, b = Poly.symbols("a b")
    op = parse_operator("a*X + b*D")
    assert op == OperatorPolynomial.from_word("X", coeff=a) + OperatorPolynomial.from_word("D", coeff=b)


def test_indexed_letters_set_modes():
    node = parse_expression("X0*D2 + X1")
    assert max_mode(node) == 2
    assert parse_operator("X0*D2 + X1").modes == 3


def test_rationals_and_negation():
    assert parse_expression("3/2") == Num(Fraction(3, 2))
    op = parse_operator("-X + 1/2*D - (X - D)")
    assert normal_order(op).pairs() == {(1, 0): -2, (0, 1): Fraction(3, 2)}


def test_precedence():
    # ^ binds tighter than *, which binds tighter than +
    assert normal_order(parse_operator("X + X*D^2")).pairs() == {(1, 0): 1, (1, 2): 1}
    assert normal_order(parse_operator("2*X^2")).pairs() == {(2, 0): 2}


def test_coefficient_expression():
    params = ("q",)
    c = to_coefficient(parse_expression("3/2*q^2 - 1"), params)
    assert format_coeff(c) == "3/2*q^2 - 1"
    with pytest.raises(ValueError):
        to_coefficient(parse_expression("q*X"), params)


@pytest.mark.parametrize("text,offset", [
    ("X*D+", 4),
    ("X D", 2),
    ("(X+D", 4),
    ("X^D", 2),
    ("X^1/2", 2),
    ("X # D", 2),
    ("é*X", 0),
    ("X*é", 2),
])
def test_syntax_error_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.offset == offset
    assert f"at byte {offset}" in str(info.value)


def test_juxtaposition_rejected():
    with pytest.raises(ParseError, match="juxtaposed"):
        parse_expression("XD")


def test_exponent_overflow():
    with pytest.raises(ParseError, match="exceeds the limit"):
        parse_expression(f"X^{MAX_EXPONENT + 1}")


def test_symbol_named_like_letter_prefix():
    assert parse_expression("Xi") == Sym("Xi")
    assert parse_expression("Delta") == Sym("Delta")


terms = st.lists(st.tuples(st.integers(-5, 5), st.text("XD", min_size=1, max_size=5)), min_size=1, max_size=4)


@given(terms)
def test_text_round_trip(ts):
    text = " + ".join(f"({c})*" + "*".join(w) for c, w in ts)
    expected = OperatorPolynomial.scalar(0)
    for c, w in ts:
        expected = expected + OperatorPolynomial.from_word(w, coeff=c)
    assert normal_order(parse_operator(text)) == normal_order(expected)
