from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from weylkit import Poly, constant_term, exp_normal_order, normal_order
from weylkit.errors import SeriesError
from weylkit.parser import parse_operator
from weylkit.series import (
    ODESystemSpec, TruncatedSeries, bivariate_coeff, borel, closed_gf, cos_series, exp_times_derivative_check,
    laplace, quad_form_components, quad_form_trig_check, sec_series, solve_increasing_tree, solve_ode_system,
    tan_series,
)

N = 12
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def series_st(order=8, const=None):
    coeff = rationals | st.just(Fraction(0))
    return st.lists(coeff, min_size=order + 1, max_size=order + 1).map(
        lambda cs: TruncatedSeries(([const] + cs[1:]) if const is not None else cs, order))


def test_involution_egf():
    s = (TruncatedSeries([0, 1, Fraction(1, 2)], 4)).exp()
    assert s.egf() == [1, 1, 2, 4, 10]


def test_integrate_geometric():
    s = TruncatedSeries.geometric(6).integrate()
    assert s.coeffs == (0, 1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(1, 6))


def test_exp_of_rational():
    assert closed_gf("lah", 5).egf() == [1, 1, 3, 13, 73, 501]


def test_mixed_orders_truncate():
    a = TruncatedSeries.geometric(5)
    b = TruncatedSeries.geometric(3)
    assert (a + b).order == 3
    assert (a * b).order == 3


def test_precondition_errors():
    with pytest.raises(SeriesError, match="constant term 0"):
        TruncatedSeries([1, 1], 3).exp()
    with pytest.raises(SeriesError, match="constant term 1"):
        TruncatedSeries([2, 1], 3).log()
    with pytest.raises(SeriesError, match="inner constant term 0"):
        TruncatedSeries.geometric(3).compose(TruncatedSeries([1, 1], 3))
    with pytest.raises(SeriesError):
        TruncatedSeries.geometric(3).truncate(5)


def test_laplace_examples():
    assert laplace(TruncatedSeries.exp_z(8)) == TruncatedSeries.geometric(8)
    assert laplace(TruncatedSeries.zero(4)) == TruncatedSeries.zero(4)
    sqrt_sec = cos_series(12, 2).power(Fraction(-1, 2))
    assert [laplace(sqrt_sec)[2 * n] for n in range(4)] == [1, 2, 28, 1112]
    assert borel(laplace(sqrt_sec)) == sqrt_sec


def test_fractional_power_squares_back():
    s = TruncatedSeries([1, 3, -2, 5], 10)
    root = s.power(Fraction(1, 2))
    assert root * root == s
    cube = s.power(Fraction(-1, 3))
    assert (cube ** 3).reciprocal() == s


def test_trig_identities():
    t = tan_series(N, 2)
    assert t.differentiate() == (1 + t * t).truncate(N - 1) * 2
    assert sec_series(N) * cos_series(N) == TruncatedSeries.one(N)


# ring laws ------------------------------------------------------------------------

@settings(max_examples=40)
@given(series_st(), series_st(), series_st())
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40)
@given(series_st(10, const=Fraction(0)))
def test_exp_log_inverse(a):
    assert a.exp().log() == a


@settings(max_examples=40)
@given(series_st(8, const=Fraction(1)))
def test_log_exp_inverse(a):
    assert a.log().exp() == a


@settings(max_examples=30)
@given(series_st(6), series_st(6, const=Fraction(0)), series_st(6, const=Fraction(0)))
def test_compose_is_homomorphism(a, b, inner):
    assert (a * b).compose(inner) == a.compose(inner) * b.compose(inner)


@given(series_st(8), rationals)
def test_rescaling_law(a, c):
    scaled = a.scale(c)
    assert all(scaled[n] == a[n] * c ** n for n in range(9))


# increasing trees and ODE systems -------------------------------------------------------

def test_increasing_tree_binary():
    u, = Poly.symbols("u")
    t = solve_increasing_tree([0, 0, 1], 8)
    expected = TruncatedSeries([0] + [u ** (n + 1) for n in range(1, 9)], 8)
    assert t == expected
    assert solve_increasing_tree([0, 0, 1], 8, 1) == TruncatedSeries([0] + [1] * 8, 8)


def test_increasing_tree_ternary_and_constant():
    # phi = y^3 at u = 1 solves T' = (1 + T)^3: n! [z^n] T = (2n-1)!!
    assert solve_increasing_tree([0, 0, 0, 1], 5, 1).egf() == [0, 1, 3, 15, 105, 945]
    # its exponential exp(u v / (1 - 2 z)^(1/2) - u v) counts X^3 D diagrams
    assert closed_gf("xrd", 4, r=3).egf() == [1, 1, 4, 25, 211]
    assert solve_increasing_tree([1], 6, 1) == TruncatedSeries.z(6)


def test_zigzag_system():
    a_sol, = solve_ode_system(ODESystemSpec([{(0,): 1, (2,): 4}]), N)
    assert a_sol.egf()[3] == 8
    assert a_sol == tan_series(N, 2) * Fraction(1, 2)
    # D' = 2A gives -1/2 log cos 2z
    d = (a_sol * 2).integrate()
    assert d == cos_series(N, 2).log() * Fraction(-1, 2)


def test_zero_system():
    sols = solve_ode_system(ODESystemSpec([{}, {}], [0, 0]), 6)
    assert all(s == TruncatedSeries.zero(6) for s in sols)


def test_ode_spec_validation():
    with pytest.raises(SeriesError):
        ODESystemSpec([])
    with pytest.raises(SeriesError):
        ODESystemSpec([{(1,): 1}, {(0, 1): 1}])


def test_quad_form_matches_engine():
    names = ("alpha", "beta", "gamma", "u", "v")
    al, be, ga, u, v = Poly.symbols(names)
    g = closed_gf("quad-form", 7, alpha=al, beta=be, gamma=ga, u=u, v=v)
    seq = exp_normal_order(parse_operator("alpha*D^2 + beta*X^2 + gamma*X*D", 1, ("u", "v")), 7)
    for n, nf in enumerate(seq):
        total = Poly.const(0, names)
        for ((a, b),), c in nf.items():
            total = total + c * u ** a * v ** b
        assert total == g[n] * factorial(n)


def test_quad_form_components_at_circle():
    a, b, c, d = quad_form_components(N, 1, 1, 0)
    assert a == b == tan_series(N, 2) * Fraction(1, 2)
    assert c == sec_series(N, 2) - 1
    assert d == cos_series(N, 2).log() * Fraction(-1, 2)


@pytest.mark.parametrize("abc", [(1, 1, 1), (2, 3, 1)])
def test_quad_form_trig_float(abc):
    assert quad_form_trig_check(*abc)


def test_ehrenfest_system():
    from weylkit.series import cosh_series, sinh_series
    x, y = Poly.symbols("x y")
    tx, ty = solve_ode_system(ODESystemSpec([{(0, 1): 1}, {(1, 0): 1}], [x, y]), 10)
    assert tx + x == cosh_series(10) * x + sinh_series(10) * y
    assert ty + y == cosh_series(10) * y + sinh_series(10) * x


# closed generating functions -------------------------------------------------------------

def test_bell_family():
    assert closed_gf("bell", 5).egf() == [1, 1, 2, 5, 15, 52]


def test_involution_family_row_sums():
    from weylkit.numbers import involution_coeff
    g = closed_gf("involution", 8).egf()
    for n in range(9):
        assert g[n] == sum(involution_coeff(n, l, m) for l in range(n + 1) for m in range(n + 1))


def test_quad_circle_constant_terms():
    g = closed_gf("quad-circle", 8, u=0, v=0)
    assert [g.egf()[2 * n] for n in range(5)] == [1, 2, 28, 1112, 87568]
    seq = exp_normal_order(parse_operator("X^2+D^2"), 8)
    assert [constant_term(nf) for nf in seq] == g.egf()


@pytest.mark.parametrize("family,expr,params", [
    ("involution", "alpha*X + beta*D", {"alpha": "alpha", "beta": "beta"}),
    ("geninv-x", "X + D^2", {}),
    ("geninv-d", "D + X^2", {}),
    ("geninv-x", "X + 2*D^3 - D", {"a": (0, -1, 0, 2)}),
    ("quad-circle", "X^2 + D^2", {}),
    ("xrd", "X^3*D", {"r": 3}),
    ("planted", "X^2*D + X", {}),
    ("planted", "(1 + X^2)*D + 2*X^2", {"phi": (1, 0, 1), "rho": (0, 0, 2)}),
])
def test_family_matches_rewrite(family, expr, params):
    names = ("alpha", "beta", "u", "v")
    gens = dict(zip(names, Poly.symbols(names)))
    kw = {k: gens.get(v, v) if isinstance(v, str) else v for k, v in params.items()}
    order = 7
    g = closed_gf(family, order, u=gens["u"], v=gens["v"], **kw)
    seq = exp_normal_order(parse_operator(expr, 1, names), order)
    for n, nf in enumerate(seq):
        for ((a, b),), c in nf.items():
            assert bivariate_coeff(g[n] * factorial(n), a, b) == c, (n, a, b)


def test_eulerian_family():
    u, = Poly.symbols("u")
    g = closed_gf("eulerian", 5, u=u).egf()
    assert g[4] == u ** 4 + 11 * u ** 3 + 11 * u ** 2 + u
    assert [sum(p.univariate("u")) if isinstance(p, Poly) else p for p in g] == [1, 1, 2, 6, 24, 120]


def test_unknown_family():
    with pytest.raises(SeriesError, match="unknown family"):
        closed_gf("nope", 3)
    with pytest.raises(SeriesError):
        closed_gf("xrd", 3, r=1)


# exponential times derivative ------------------------------------------------------------

@pytest.mark.parametrize("n,m", [(1, 2), (2, 1), (3, 3)])
def test_exp_times_derivative_examples(n, m):
    assert exp_times_derivative_check(n, m, 12)


def test_exp_times_derivative_order_guard():
    with pytest.raises(SeriesError):
        exp_times_derivative_check(3, 3, 5)
