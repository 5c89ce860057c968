"""Lattice-path evaluation of constant terms and Jacobi continued fractions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from .coeffs import Poly, q_int
from .errors import ModeError, SeriesError
from .series import TruncatedSeries
from .weyl import Kind, word as make_word


def weyl_path_ct(w) -> int:
    """Constant term of a single-mode word read as a weighted path.

    Scanning right to left, X climbs one unit; D multiplies by the current
    altitude and descends (a descent from altitude 0 kills the path).
    """
    if isinstance(w, str):
        w = make_word(w)
    k = 0
    weight = 1
    for letter in reversed(tuple(w)):
        if letter.mode:
            raise ModeError("weyl_path_ct handles a single mode")
        if letter.kind is Kind.RAISE:
            k += 1
        else:
            if k == 0:
                return 0
            weight *= k
            k -= 1
    return weight if k == 0 else 0


def falling_weight(b: int) -> Callable[[int], int]:
    """Descent weight ``k (k-1) ... (k-b+1)`` of D^b applied at altitude k."""
    def w(k: int) -> int:
        out = 1
        for i in range(b):
            out *= k - i
        return out
    return w


def unit_weight(k: int) -> int:
    return 1


@dataclass(frozen=True)
class Step:
    amplitude: int
    weight: Callable[[int], object] = unit_weight


class StepSet(tuple):
    """Tuple of :class:`Step`; paths may not go below altitude 0."""

    def __new__(cls, steps: Sequence[Step]):
        return super().__new__(cls, tuple(steps))

    @property
    def max_ascent(self) -> int:
        return max((s.amplitude for s in self if s.amplitude > 0), default=0)


def binomial_steps(a: int, b: int, weighted: bool = True) -> StepSet:
    """Steps for ``X^a + D^b``: ascent ``+a``, descent ``-b`` with falling-factorial weight."""
    return StepSet([Step(a), Step(-b, falling_weight(b) if weighted else unit_weight)])


def lattice_count(steps: StepSet, n: int):
    """Total weight of length-``n`` paths from 0 to 0 that stay nonnegative.

    Altitudes above ``n * max_ascent`` are unreachable in n steps, so the
    table never needs more rows than that.
    """
    if n < 0:
        raise ValueError("length must be nonnegative")
    cap = n * max(steps.max_ascent, 1)
    row: Dict[int, object] = {0: 1}
    for _ in range(n):
        nxt: Dict[int, object] = {}
        for k, c in row.items():
            for st in steps:
                k2 = k + st.amplitude
                if k2 < 0 or k2 > cap:
                    continue
                w = st.weight(k)
                if w:
                    nxt[k2] = nxt.get(k2, 0) + c * w
        row = {k: v for k, v in nxt.items() if v}
    return row.get(0, 0)


def motzkin_steps(lam: Callable[[int], object], mu: Callable[[int], object]) -> StepSet:
    """Motzkin steps: level weight ``lam(k)``, descent from k weight ``mu(k)``."""
    return StepSet([Step(1), Step(0, lam), Step(-1, mu)])


@dataclass(frozen=True)
class JFractionSpec:
    """``1/(1 - lam(0) z - mu(1) z^2/(1 - lam(1) z - mu(2) z^2/...))`` cut at ``depth`` levels."""

    mu: Callable[[int], object]
    lam: Callable[[int], object] = lambda k: 0
    depth: int = 8

    def __post_init__(self):
        if self.depth < 1:
            raise SeriesError("continued fraction depth must be at least 1")


def jfraction_expand(spec: JFractionSpec, order: int) -> TruncatedSeries:
    """Ordinary series of the truncated J-fraction through ``z^order``.

    Paths of length ``order`` never rise above ``order // 2``, so depth
    ``order // 2 + 1`` already gives exact coefficients.
    """
    if spec.depth < order // 2 + 1:
        raise SeriesError(f"depth {spec.depth} too small for order {order}; need {order // 2 + 1}")
    f = TruncatedSeries.zero(order)
    for k in range(spec.depth - 1, -1, -1):
        denom = TruncatedSeries([1, -spec.lam(k)], order) - TruncatedSeries([0, 0, spec.mu(k + 1)], order) * f
        f = denom.reciprocal()
    return f


def q_jfraction_expand(factors: Callable[[int], Sequence[int]], order: int, q=None,
                       depth: int = None) -> TruncatedSeries:
    """J-fraction with ``mu(k) = prod_{i in factors(k)} [i]_q`` and no level steps."""
    if q is None:
        (q,) = Poly.symbols("q")

    def mu(k):
        out = 1
        for i in factors(k):
            out = out * q_int(i, q)
        return out

    depth = depth if depth is not None else order // 2 + 1
    return jfraction_expand(JFractionSpec(mu=mu, depth=depth), order)


def fermat_mu(r: int) -> Callable[[int], int]:
    """``mu(k) = (rk)(rk-1)...(rk-r+1)``, the grouped weights for ``X^r + D^r``."""
    fw = falling_weight(r)
    return lambda k: fw(r * k)


def rescale(series: TruncatedSeries, c) -> TruncatedSeries:
    """Coefficient n multiplied by ``c^n`` (the substitution z -> c z)."""
    return series.scale(c)


def halve_even(series: TruncatedSeries) -> List:
    """``c_{2n} / 2^n``: the z -> z/sqrt(2) convention, valid when odd coefficients vanish."""
    if any(series[k] for k in range(1, series.order + 1, 2)):
        raise SeriesError("odd coefficients must vanish for the sqrt(2) rescaling")
    out = []
    for n in range(series.order // 2 + 1):
        c = series[2 * n]
        c = c / 2 ** n if isinstance(c, Poly) else Fraction(c, 2 ** n)
        out.append(c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c)
    return out
