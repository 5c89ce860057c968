from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weylkit.coeffs import ParameterMismatch, Poly, as_scalar, evaluate, format_coeff, q_factorial, q_int

Q, = Poly.symbols("q")
A, B = Poly.symbols("a b")

small = st.integers(-5, 5)
polys_ab = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small, max_size=5).map(
    lambda d: Poly(d, ("a", "b"))
)


def test_zero_terms_dropped():
    p = A - A
    assert p.terms == {}
    assert not p
    assert p == 0


def test_fraction_collapses_to_int():
    p = A * Fraction(4, 2)
    assert p.terms == {(1, 0): 2}
    assert type(p.terms[(1, 0)]) is int


def test_format_canonical():
    assert format_coeff(Fraction(3, 2) * Q ** 2 - 1) == "3/2*q^2 - 1"
    assert format_coeff(A * B * 2 - B ** 3 + Fraction(-1, 3)) == "-b^3 + 2*a*b - 1/3"
    assert format_coeff(Fraction(5, 1)) == "5"
    assert format_coeff(Poly({}, ("q",))) == "0"


def test_context_mismatch():
    with pytest.raises(ParameterMismatch):
        _ = Q + A


def test_empty_context_coerces():
    c = Poly.const(3)
    assert (c + Q) == Q + 3
    assert (Q + c) == Q + 3


def test_constant_equality_and_hash():
    c = Poly.const(Fraction(1, 2), ("q",))
    assert c == Fraction(1, 2)
    assert hash(c) == hash(Fraction(1, 2))
    assert as_scalar(c) == Fraction(1, 2)


def test_subs_and_evaluate():
    p = A ** 2 * B + 3 * A
    assert evaluate(p, {"a": 2, "b": Fraction(1, 2)}) == 8
    partial = p.subs({"a": 1})
    assert partial.univariate("b") == [3, 1]
    assert evaluate(7, {"a": 1}) == 7


def test_division_by_scalar():
    assert (A * 3) / 6 == A * Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        _ = A / 0


def test_q_integers():
    assert q_int(0, Q) == 0
    assert q_int(4, Q) == 1 + Q + Q ** 2 + Q ** 3
    assert q_int(5) == 5
    assert q_factorial(3, Q) == (1 + Q) * (1 + Q + Q ** 2)
    assert q_factorial(4) == 24


@given(polys_ab, polys_ab, polys_ab)
def test_ring_axioms(p, r, s):
    assert (p + r) + s == p + (r + s)
    assert p * r == r * p
    assert p * (r + s) == p * r + p * s
    assert (p * r) * s == p * (r * s)


@given(polys_ab, st.integers(0, 4))
def test_power_matches_repeated_product(p, n):
    out = Poly.const(1, ("a", "b"))
    for _ in range(n):
        out = out * p
    assert p ** n == out


@given(polys_ab, small, small)
def test_evaluation_is_homomorphism(p, x, y):
    r = p * p + p
    val = evaluate(p, {"a": x, "b": y})
    assert evaluate(r, {"a": x, "b": y}) == val * val + val
