from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weylkit import Poly, constant_term, normal_order, power_normal_order
from weylkit.errors import ModeError, SeriesError
from weylkit.numbers import touchard_riordan
from weylkit.parser import parse_operator
from weylkit.paths import (
    JFractionSpec, Step, StepSet, binomial_steps, falling_weight, fermat_mu, halve_even, jfraction_expand,
    lattice_count, motzkin_steps, q_jfraction_expand, rescale, weyl_path_ct,
)
from weylkit.series import TruncatedSeries
from weylkit.weyl import word

Q, = Poly.symbols("q")


def test_weyl_path_examples():
    assert weyl_path_ct("DDXX") == 2
    assert weyl_path_ct("XXDD") == 0
    assert weyl_path_ct("DXDDXDXX") == 4
    assert weyl_path_ct("") == 1


def test_weyl_path_single_mode_only():
    with pytest.raises(ModeError):
        weyl_path_ct(word("DX", mode=1))


@settings(max_examples=300)
@given(st.text(alphabet="XD", max_size=12))
def test_path_operator_agreement(w):
    assert weyl_path_ct(w) == constant_term(normal_order(w))


def test_lattice_count_examples():
    assert lattice_count(binomial_steps(3, 2), 5) == 864
    assert lattice_count(binomial_steps(4, 2), 3) == 24
    assert lattice_count(binomial_steps(2, 3, weighted=False), 10) == 23
    assert lattice_count(binomial_steps(2, 3), 0) == 1


def test_lattice_count_negative_length():
    with pytest.raises(ValueError):
        lattice_count(binomial_steps(1, 1), -1)


@pytest.mark.parametrize("a,b", [(3, 2), (4, 2), (1, 1), (2, 2), (1, 3)])
def test_binomial_paths_match_constant_terms(a, b):
    h = normal_order(parse_operator(f"X^{a} + D^{b}"))
    for n in range(11 if a + b <= 5 else 8):
        assert lattice_count(binomial_steps(a, b), n) == constant_term(power_normal_order(h, n))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_fermat_weights_match_operator(r):
    # grouping r ascents into one Motzkin ascent gives weight falling(rk, r)
    h = normal_order(parse_operator(f"X^{r} + D^{r}"))
    steps = motzkin_steps(lambda k: 0, fermat_mu(r))
    for n in range(9):
        assert lattice_count(steps, n) == constant_term(power_normal_order(h, n))


def test_hermite_fraction():
    s = jfraction_expand(JFractionSpec(mu=lambda k: k, depth=6), 10)
    assert [s[2 * n] for n in range(5)] == [1, 1, 3, 15, 105]
    assert all(s[2 * n + 1] == 0 for n in range(5))


def test_fermat_two_fraction():
    s = jfraction_expand(JFractionSpec(mu=fermat_mu(2), depth=8), 14)
    assert [s[2 * n] for n in range(4)] == [1, 2, 28, 1112]
    assert halve_even(s)[:5] == [1, 1, 7, 139, 5473]


def test_fermat_three_fraction():
    s = jfraction_expand(JFractionSpec(mu=fermat_mu(3), depth=5), 8)
    assert [s[2 * n] for n in range(5)] == [1, 6, 756, 458136, 765341136]


def test_insufficient_depth():
    with pytest.raises(SeriesError, match="too small"):
        jfraction_expand(JFractionSpec(mu=lambda k: k, depth=2), 10)
    with pytest.raises(SeriesError):
        JFractionSpec(mu=lambda k: k, depth=0)


SPECS = [
    (lambda k: k, lambda k: 0),
    (fermat_mu(2), lambda k: 0),
    (lambda k: k, lambda k: k),
    (lambda k: 2 * k + 1, lambda k: k + 1),
    (lambda k: Fraction(k, 3), lambda k: 1),
]


@pytest.mark.parametrize("mu,lam", SPECS)
def test_fraction_path_agreement(mu, lam):
    order = 14
    s = jfraction_expand(JFractionSpec(mu=mu, lam=lam, depth=order // 2 + 1), order)
    steps = motzkin_steps(lam, mu)
    assert [s[n] for n in range(order + 1)] == [lattice_count(steps, n) for n in range(order + 1)]


def test_q_hermite_fraction():
    s = q_jfraction_expand(lambda k: [k], 10, Q)
    assert s[4] == 2 + Q
    assert s[0] == 1
    for n in range(6):
        assert s[2 * n] == touchard_riordan(n, Q)


def test_q_fermat_two_fraction():
    s = q_jfraction_expand(lambda k: [2 * k - 1, 2 * k], 8, Q)
    assert s[2] == 1 + Q
    assert s[4].subs({"q": 1}) == 28
    undeformed = jfraction_expand(JFractionSpec(mu=fermat_mu(2), depth=5), 8)
    assert [c.subs({"q": 1}) if isinstance(c, Poly) else c for c in s.coeffs] == list(undeformed.coeffs)


def test_q_fraction_matches_q_rewrite():
    s = q_jfraction_expand(lambda k: [2 * k - 1, 2 * k], 10, Q)
    h = normal_order(parse_operator("X^2 + D^2", Q))
    for n in range(11):
        assert s[n] == constant_term(power_normal_order(h, n))


@given(st.lists(st.integers(-5, 5), min_size=7, max_size=7), st.fractions(-3, 3, max_denominator=5))
def test_rescaling_law(cs, c):
    s = TruncatedSeries(cs, 6)
    r = rescale(s, c)
    assert all(r[n] == s[n] * c ** n for n in range(7))


def test_halve_even_rejects_odd_terms():
    with pytest.raises(SeriesError):
        halve_even(TruncatedSeries([1, 1, 1], 2))


def test_step_helpers():
    assert falling_weight(2)(5) == 20
    assert falling_weight(3)(2) == 0
    steps = StepSet([Step(2), Step(-1)])
    assert steps.max_ascent == 2
