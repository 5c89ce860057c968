"""Truncated power series over exact coefficients, ODE solvers and closed generating functions.

Coefficients may be ``int``, ``Fraction`` or :class:`~weylkit.coeffs.Poly`.
Series of different truncation orders combine at the smaller order.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from .coeffs import Poly, as_scalar, format_coeff
from .errors import SeriesError


def _inv_scalar(c):
    c = as_scalar(c)
    if isinstance(c, Poly):
        raise SeriesError(f"constant term {format_coeff(c)} is not invertible in the coefficient ring")
    if c == 0:
        raise SeriesError("constant term 0 is not invertible")
    return Fraction(1) / c


def _div(c, k):
    """Exact division of a coefficient by a nonzero integer or rational."""
    if isinstance(c, int):
        return Fraction(c, 1) / k
    return c / k


def _clean(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class TruncatedSeries:
    """``c_0 + c_1 z + ... + c_N z^N``, known exactly through ``z^N``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence, order: int = None):
        coeffs = [_clean(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise SeriesError("truncation order must be nonnegative")
        coeffs = coeffs[: order + 1] + [0] * (order + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, order: int):
        return cls([], order)

    @classmethod
    def one(cls, order: int):
        return cls([1], order)

    @classmethod
    def z(cls, order: int):
        return cls([0, 1], order)

    @classmethod
    def constant(cls, c, order: int):
        return cls([c], order)

    @classmethod
    def from_egf(cls, counts: Sequence, order: int = None):
        """Series whose ``n! [z^n]`` are ``counts``."""
        return cls([_div(c, math.factorial(n)) if c else 0 for n, c in enumerate(counts)], order)

    @classmethod
    def geometric(cls, order: int, ratio=1):
        return cls([ratio ** n for n in range(order + 1)], order)

    @classmethod
    def exp_z(cls, order: int, scale=1):
        """``exp(scale * z)``."""
        return cls([_div(scale ** n, math.factorial(n)) for n in range(order + 1)], order)

    # access --------------------------------------------------------------------
    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def egf(self) -> list:
        """``[n! c_n]``."""
        return [_clean(c * math.factorial(n)) for n, c in enumerate(self.coeffs)]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend a series known through z^{self.order} to z^{order}")
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def map(self, fn: Callable) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs], self.order)

    # ring operations -------------------------------------------------------------
    def _pair(self, other):
        if not isinstance(other, TruncatedSeries):
            return self, TruncatedSeries.constant(other, self.order)
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n)

    def __add__(self, other):
        a, b = self._pair(other)
        return TruncatedSeries([x + y for x, y in zip(a.coeffs, b.coeffs)], a.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([c * other for c in self.coeffs], self.order)
        a, b = self._pair(other)
        n = a.order
        ac, bc = a.coeffs, b.coeffs
        nz_a = [i for i, c in enumerate(ac) if c]
        out = [0] * (n + 1)
        for i in nz_a:
            ci = ac[i]
            for j in range(n + 1 - i):
                if bc[j]:
                    out[i + j] = out[i + j] + ci * bc[j]
        return TruncatedSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        return TruncatedSeries([_div(c, other) for c in self.coeffs], self.order)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise SeriesError("use power() for non-integer or negative exponents")
        out = TruncatedSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        body = ", ".join(format_coeff(c) for c in self.coeffs)
        return f"TruncatedSeries([{body}], order={self.order})"

    # calculus ------------------------------------------------------------------
    def differentiate(self) -> "TruncatedSeries":
        """Derivative; known one order less than the input."""
        if self.order == 0:
            raise SeriesError("derivative of an order-0 series carries no information")
        return TruncatedSeries([c * n for n, c in enumerate(self.coeffs) if n], self.order - 1)

    def integrate(self) -> "TruncatedSeries":
        """Antiderivative with zero constant, kept at the same order."""
        return TruncatedSeries([0] + [_div(c, n + 1) for n, c in enumerate(self.coeffs[:-1])], self.order)

    def reciprocal(self) -> "TruncatedSeries":
        inv0 = _inv_scalar(self.coeffs[0])
        n = self.order
        out = [inv0] + [0] * n
        for k in range(1, n + 1):
            acc = 0
            for j in range(1, k + 1):
                if self.coeffs[j]:
                    acc = acc + self.coeffs[j] * out[k - j]
            out[k] = -acc * inv0
        return TruncatedSeries(out, n)

    def exp(self) -> "TruncatedSeries":
        if self.coeffs[0]:
            raise SeriesError(f"exp needs constant term 0, got {format_coeff(self.coeffs[0])}")
        n = self.order
        a = self.coeffs
        out = [1] + [0] * n
        # E' = A' E  =>  k e_k = sum_j j a_j e_{k-j}
        for k in range(1, n + 1):
            acc = 0
            for j in range(1, k + 1):
                if a[j]:
                    acc = acc + j * a[j] * out[k - j]
            out[k] = _div(acc, k)
        return TruncatedSeries(out, n)

    def log(self) -> "TruncatedSeries":
        if self.coeffs[0] != 1:
            raise SeriesError(f"log needs constant term 1, got {format_coeff(self.coeffs[0])}")
        if self.order == 0:
            return TruncatedSeries.zero(0)
        quotient = self.differentiate() * self.truncate(self.order - 1).reciprocal()
        return TruncatedSeries([0] + [_div(c, k + 1) for k, c in enumerate(quotient.coeffs)], self.order)

    def power(self, alpha) -> "TruncatedSeries":
        """``S^alpha`` for rational ``alpha`` and constant term 1.

        Uses the recurrence from ``S P' = alpha S' P``; no fractional powering.
        """
        alpha = Fraction(alpha)
        if alpha.denominator == 1 and alpha >= 0:
            return self ** int(alpha)
        if self.coeffs[0] != 1:
            raise SeriesError(f"fractional power needs constant term 1, got {format_coeff(self.coeffs[0])}")
        n = self.order
        a = self.coeffs
        p = [1] + [0] * n
        for k in range(1, n + 1):
            acc = 0
            for j in range(1, k + 1):
                if a[j]:
                    acc = acc + ((alpha + 1) * j - k) * a[j] * p[k - j]
            p[k] = _div(acc, k)
        return TruncatedSeries(p, n)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """``self(inner(z))`` by Horner's rule; ``inner`` must have constant term 0."""
        if inner.coeffs[0]:
            raise SeriesError(f"compose needs inner constant term 0, got {format_coeff(inner.coeffs[0])}")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        out = TruncatedSeries.zero(n)
        for c in reversed(self.coeffs[: n + 1]):
            out = out * inner + c
        return out

    def scale(self, c) -> "TruncatedSeries":
        """``S(c z)``."""
        return TruncatedSeries([a * c ** k for k, a in enumerate(self.coeffs)], self.order)


def laplace(s: TruncatedSeries) -> TruncatedSeries:
    """Formal Laplace transform: ``c_n -> n! c_n``."""
    return TruncatedSeries(s.egf(), s.order)


def borel(s: TruncatedSeries) -> TruncatedSeries:
    """Inverse of :func:`laplace`."""
    return TruncatedSeries.from_egf(s.coeffs, s.order)


# ---------------------------------------------------------------------------
# elementary series


def sin_series(order: int, scale=1) -> TruncatedSeries:
    c = [0] * (order + 1)
    for k in range(1, order + 1, 2):
        c[k] = Fraction((-1) ** (k // 2) * scale ** k, math.factorial(k))
    return TruncatedSeries(c, order)


def cos_series(order: int, scale=1) -> TruncatedSeries:
    c = [0] * (order + 1)
    for k in range(0, order + 1, 2):
        c[k] = Fraction((-1) ** (k // 2) * scale ** k, math.factorial(k))
    return TruncatedSeries(c, order)


def tan_series(order: int, scale=1) -> TruncatedSeries:
    return sin_series(order, scale) / cos_series(order, scale)


def sec_series(order: int, scale=1) -> TruncatedSeries:
    return cos_series(order, scale).reciprocal()


def cosh_series(order: int) -> TruncatedSeries:
    return TruncatedSeries([Fraction(1, math.factorial(k)) if k % 2 == 0 else 0 for k in range(order + 1)])


def sinh_series(order: int) -> TruncatedSeries:
    return TruncatedSeries([Fraction(1, math.factorial(k)) if k % 2 else 0 for k in range(order + 1)])


# ---------------------------------------------------------------------------
# polynomial evaluation on series


def poly_of_series(coeffs: Sequence, arg: TruncatedSeries) -> TruncatedSeries:
    """``sum_j coeffs[j] * arg^j`` by Horner's rule (``arg`` may have any constant term)."""
    out = TruncatedSeries.zero(arg.order)
    for c in reversed(list(coeffs)):
        out = out * arg + c
    return out


class ODESystemSpec:
    """``T_j' = F_j(x_1 + T_1, ..., x_m + T_m)``, ``T_j(0) = 0``.

    ``rhs[j]`` maps exponent tuples of length ``m`` to coefficients.  ``shifts``
    holds the values ``x_j`` (numbers or parameters).
    """

    def __init__(self, rhs: Sequence[Mapping[Tuple[int, ...], object]], shifts: Sequence = None):
        self.m = len(rhs)
        if self.m < 1:
            raise SeriesError("an ODE system needs at least one unknown")
        self.rhs = [dict(r) for r in rhs]
        for r in self.rhs:
            for e in r:
                if len(e) != self.m:
                    raise SeriesError(f"exponent {e} does not have arity {self.m}")
        self.shifts = list(shifts) if shifts is not None else [0] * self.m
        if len(self.shifts) != self.m:
            raise SeriesError("one shift per unknown is required")


def eval_multivariate(poly: Mapping[Tuple[int, ...], object], args: Sequence[TruncatedSeries]) -> TruncatedSeries:
    order = min(a.order for a in args)
    powers: Dict[Tuple[int, int], TruncatedSeries] = {}

    def pw(i, k):
        if (i, k) not in powers:
            powers[(i, k)] = TruncatedSeries.one(order) if k == 0 else pw(i, k - 1) * args[i]
        return powers[(i, k)]

    out = TruncatedSeries.zero(order)
    for e, c in poly.items():
        term = TruncatedSeries.constant(c, order)
        for i, k in enumerate(e):
            if k:
                term = term * pw(i, k)
        out = out + term
    return out


def solve_ode_system(spec: ODESystemSpec, order: int) -> List[TruncatedSeries]:
    """Formal solution of the system through ``z^order``, one coefficient at a time."""
    m = spec.m
    coeffs = [[0] * (order + 1) for _ in range(m)]
    for n in range(order):
        args = [TruncatedSeries([spec.shifts[i]] + coeffs[i][1 : n + 1], n) for i in range(m)]
        for j in range(m):
            val = eval_multivariate(spec.rhs[j], args)[n]
            coeffs[j][n + 1] = _clean(_div(val, n + 1)) if val else 0
    return [TruncatedSeries(c, order) for c in coeffs]


def planted_part(rho: Mapping[Tuple[int, ...], object], shifts: Sequence, sols: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """``R = int_0^z rho(x + T(w)) dw`` for a solved system."""
    args = [s + x for s, x in zip(sols, shifts)]
    return eval_multivariate(rho, args).integrate()


def solve_increasing_tree(phi: Sequence, order: int, u=None) -> TruncatedSeries:
    """``T' = phi(u + T)``, ``T(0) = 0``; ``phi`` is a coefficient list.

    ``u`` defaults to a fresh parameter ``u``.
    """
    if u is None:
        (u,) = Poly.symbols("u")
    rhs = {(k,): c for k, c in enumerate(phi) if c}
    return solve_ode_system(ODESystemSpec([rhs], [u]), order)[0]


# ---------------------------------------------------------------------------
# closed generating functions

def _bell(order, u=1, **_):
    return ((TruncatedSeries.exp_z(order) - 1) * u).exp()


def _involution(order, alpha=1, beta=1, u=1, v=1, **_):
    # exp((alpha u + beta v) z + alpha beta z^2 / 2)
    return TruncatedSeries([0, alpha * u + beta * v, Fraction(1, 2) * alpha * beta], order).exp()


def _shifted_antiderivative(a: Sequence, base, order: int) -> TruncatedSeries:
    """``int_0^z a(base + w) dw`` as a series in z."""
    arg = TruncatedSeries([base, 1], order)
    return poly_of_series(a, arg).integrate()


def _geninv_x(order, a=(0, 0, 1), u=1, v=1, **_):
    # N(exp(z (X + a(D)))) = e^{zu} exp(int_0^z a(v + w) dw)
    return (TruncatedSeries([0, u], order) + _shifted_antiderivative(a, v, order)).exp()


def _geninv_d(order, a=(0, 0, 1), u=1, v=1, **_):
    # N(exp(z (D + a(X)))) = exp(int_0^z a(u + w) dw) e^{zv}
    return (_shifted_antiderivative(a, u, order) + TruncatedSeries([0, v], order)).exp()


def _quad_circle(order, u=1, v=1, **_):
    tan2 = tan_series(order, 2)
    sec2 = sec_series(order, 2)
    inner = tan2 * (Fraction(1, 2) * (u * u + v * v)) + (sec2 - 1) * (u * v)
    return cos_series(order, 2).power(Fraction(-1, 2)) * inner.exp()


def quad_form_components(order: int, alpha=1, beta=1, gamma=1) -> List[TruncatedSeries]:
    """Component EGFs A, B, C, D of the quadratic form ``alpha D^2 + beta X^2 + gamma XD``."""
    # unknowns (A, B, C, D); the system is triangular, so shifts are 0
    rhs = [
        {(0, 0, 0, 0): beta, (1, 0, 0, 0): 2 * gamma, (2, 0, 0, 0): 4 * alpha},
        {(0, 0, 0, 0): alpha, (0, 1, 0, 0): 2 * gamma, (0, 2, 0, 0): 4 * beta},
        {(0, 0, 0, 0): gamma, (0, 0, 1, 0): gamma, (1, 0, 0, 0): 4 * alpha, (1, 0, 1, 0): 4 * alpha},
        {(1, 0, 0, 0): 2 * alpha},
    ]
    return solve_ode_system(ODESystemSpec(rhs), order)


def _quad_form(order, alpha=1, beta=1, gamma=1, u=1, v=1, **_):
    a, b, c, d = quad_form_components(order, alpha, beta, gamma)
    return (a * (u * u) + b * (v * v) + c * (u * v) + d).exp()


def xrd_series(order: int, r: int, u=1, v=1) -> TruncatedSeries:
    """``exp(uv / [1 - (r-1) u^(r-1) z]^(1/(r-1)) - uv)`` for the gate X^r D."""
    if not isinstance(r, int) or r < 2:
        raise SeriesError("the X^r D family needs an integer r >= 2")
    base = TruncatedSeries([1, -(r - 1) * u ** (r - 1)], order)
    inner = base.power(Fraction(-1, r - 1)) * (u * v) - u * v
    return inner.exp()


def _xrd(order, r=2, u=1, v=1, **_):
    return xrd_series(order, r, u, v)


def _planted(order, phi=(0, 0, 1), rho=(0, 1), u=1, v=1, **_):
    t = solve_increasing_tree(phi, order, u)
    r = poly_of_series(rho, t + u).integrate()
    return (r + t * v).exp()


def _eulerian(order, u=1, **_):
    # (1-u)/(1 - u e^{z(1-u)}) = 1 / (1 - u * sum_{n>=1} z^n (1-u)^(n-1) / n!)
    w = 1 - u
    tail = [0] + [_div(w ** (n - 1), math.factorial(n)) for n in range(1, order + 1)]
    return (1 - TruncatedSeries(tail, order) * u).reciprocal()


def _exp_rational(order, **_):
    # exp(z/(1-z)): increasing-tree / Lah row sums
    return (TruncatedSeries.geometric(order) - 1).exp()


FAMILIES: Dict[str, Callable] = {
    "bell": _bell,
    "involution": _involution,
    "geninv-x": _geninv_x,
    "geninv-d": _geninv_d,
    "quad-circle": _quad_circle,
    "quad-form": _quad_form,
    "xrd": _xrd,
    "planted": _planted,
    "eulerian": _eulerian,
    "lah": _exp_rational,
}


def closed_gf(family: str, order: int, **params) -> TruncatedSeries:
    """Expand a named generating function through ``z^order``.

    Families and their parameters (defaults in brackets):

    ``bell`` u[1]; ``involution`` alpha, beta, u, v [1]; ``geninv-x`` and
    ``geninv-d`` a [(0,0,1)], u, v; ``quad-circle`` u, v; ``quad-form``
    alpha, beta, gamma, u, v; ``xrd`` r [2], u, v; ``planted`` phi, rho, u, v;
    ``eulerian`` u; ``lah`` (no parameters).
    """
    if family not in FAMILIES:
        raise SeriesError(f"unknown family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    if order < 0:
        raise SeriesError("order must be nonnegative")
    return FAMILIES[family](order, **params)


def bivariate_coeff(c, a: int, b: int, u: str = "u", v: str = "v"):
    """Extract ``[u^a v^b]`` from a coefficient polynomial."""
    if not isinstance(c, Poly):
        return c if a == b == 0 else 0
    mono = {}
    if u in c.params:
        mono[u] = a
    elif a:
        return 0
    if v in c.params:
        mono[v] = b
    elif b:
        return 0
    return as_scalar(c.coefficient(mono))


# ---------------------------------------------------------------------------
# checks that need their own series plumbing

def exp_times_derivative_check(n: int, m: int, order: int) -> bool:
    """Compare ``(e^x D)^n x^m`` with ``e^{nx} sum_k s(n,k) D^k x^m`` as series in x."""
    from .numbers import stirling1

    if order < m + n:
        raise SeriesError(f"order {order} must be at least m + n = {m + n}")
    f = TruncatedSeries([0] * m + [1], order)
    ex = TruncatedSeries.exp_z(order)

    left = f
    for _ in range(n):
        # the operator e^x D: differentiate, then multiply by e^x
        left = ex * TruncatedSeries(list(left.differentiate().coeffs), order)
    # the padding loses one order per step; compare only what is known
    known = order - n

    right = TruncatedSeries.zero(order)
    deriv = f
    for k in range(0, n + 1):
        if k:
            deriv = TruncatedSeries(list(deriv.differentiate().coeffs), order)
        right = right + deriv * stirling1(n, k)
    right = TruncatedSeries.exp_z(order, n) * right
    return left.truncate(known) == right.truncate(known)


def quad_form_trig_check(alpha: float, beta: float, gamma: float, order: int = 24,
                         z: float = 0.02, tol: float = 1e-9) -> bool:
    """Float check of the trigonometric closed form against the exact ODE series.

    Evaluates log G at (u, v) = (0.3, 0.7) and a small z, both from the
    closed form and from the exact component series.
    """
    u, v = 0.3, 0.7
    delta = math.sqrt(4 * alpha * beta - gamma ** 2)
    theta = math.atan(gamma / delta)
    ratio = math.cos(theta) / math.cos(delta * z + theta)
    closed = (
        (u * u / (4 * alpha) + v * v / (4 * beta)) * (delta * math.tan(delta * z + theta) - gamma)
        + u * v * (ratio - 1)
        - gamma / 2 * z
        + 0.5 * math.log(ratio)
    )
    a, b, c, d = quad_form_components(order, Fraction(alpha), Fraction(beta), Fraction(gamma))

    def ev(s):
        return sum(float(coef) * z ** k for k, coef in enumerate(s.coeffs))

    exact = u * u * ev(a) + v * v * ev(b) + u * v * ev(c) + ev(d)
    return abs(closed - exact) <= tol * max(1.0, abs(closed))
