"""Closed-form number families, computed without the rewrite engine."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, NamedTuple, Sequence, Tuple

from .coeffs import Poly, q_int
from .errors import DomainError


def _need(cond: bool, msg: str):
    if not cond:
        raise DomainError(msg)


def _int(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def rational_binom(x: Fraction, k: int) -> Fraction:
    """``x (x-1) ... (x-k+1) / k!`` for rational ``x``."""
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(x) - i
    return out / factorial(k)


def falling(x, k: int):
    out = 1
    for i in range(k):
        out *= x - i
    return out


# Stirling and Bell ---------------------------------------------------------

def stirling2_sum(n: int, k: int) -> int:
    _need(0 <= k <= n, f"stirling2 needs 0 <= k <= n, got ({n}, {k})")
    total = sum(comb(k, j) * (-1) ** (k - j) * j ** n for j in range(k + 1))
    return total // factorial(k)


@lru_cache(maxsize=None)
def _stirling2_rec(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return _stirling2_rec(n - 1, k - 1) + k * _stirling2_rec(n - 1, k)


def stirling2_rec(n: int, k: int) -> int:
    _need(0 <= k <= n, f"stirling2 needs 0 <= k <= n, got ({n}, {k})")
    return _stirling2_rec(n, k)


def stirling2(n: int, k: int) -> int:
    """Set partitions of an n-set into k blocks (both evaluations must agree)."""
    a = stirling2_sum(n, k)
    b = stirling2_rec(n, k)
    if a != b:
        raise ArithmeticError(f"stirling2({n},{k}): sum {a} != recurrence {b}")
    return a


@lru_cache(maxsize=None)
def _stirling1(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return _stirling1(n - 1, k - 1) + (n - 1) * _stirling1(n - 1, k)


def rising_factorial_coeffs(n: int) -> List[int]:
    """Coefficients of ``x (x+1) ... (x+n-1)`` in ascending powers of x."""
    poly = [1]
    for i in range(n):
        nxt = [0] * (len(poly) + 1)
        for j, c in enumerate(poly):
            nxt[j + 1] += c
            nxt[j] += c * i
        poly = nxt
    return poly


def stirling1(n: int, k: int) -> int:
    """Unsigned Stirling numbers of the first kind."""
    _need(0 <= k <= n, f"stirling1 needs 0 <= k <= n, got ({n}, {k})")
    a = rising_factorial_coeffs(n)[k]
    b = _stirling1(n, k)
    if a != b:
        raise ArithmeticError(f"stirling1({n},{k}): expansion {a} != recurrence {b}")
    return a


def bell(n: int) -> int:
    _need(n >= 0, "bell needs n >= 0")
    return sum(stirling2(n, k) for k in range(n + 1))


def bell_recurrence(n: int) -> int:
    b = [1]
    for m in range(n):
        b.append(sum(comb(m, k) * b[k] for k in range(m + 1)))
    return b[n]


def gen_bell_22(n: int) -> int:
    _need(n >= 0, "gen_bell_22 needs n >= 0")
    if n == 0:
        return 1
    return sum(gen_stirling_22(n, k) for k in range(2, 2 * n + 1))


def gen_bell_22_via_bell(n: int) -> int:
    """``sum_r (-1)^(n-r) C(n,r) B_(n+r)``."""
    return sum((-1) ** (n - r) * comb(n, r) * bell(n + r) for r in range(n + 1))


def dobinski_partial(n: int, terms: int) -> Fraction:
    """``sum_{l < terms} l^n / l!`` (multiply by 1/e for the Bell number)."""
    return sum((Fraction(l ** n, factorial(l)) for l in range(terms)), Fraction(0))


# generalized Stirling ---------------------------------------------------------

def falling_factorial_poly(l: int) -> List[int]:
    """Coefficients of ``x (x-1) ... (x-l+1)``."""
    poly = [1]
    for i in range(l):
        nxt = [0] * (len(poly) + 1)
        for j, c in enumerate(poly):
            nxt[j + 1] += c
            nxt[j] -= c * i
        poly = nxt
    return poly


def gen_stirling_balanced(n: int, k: int, eta: Sequence) -> object:
    """Coefficient of X^k D^k in the n-th power of ``sum_l eta[l] X^l D^l``.

    Uses ``h(x) = sum_l eta[l] x(x-1)...(x-l+1)`` and the alternating sum
    ``(1/k!) sum_j (-1)^(k-j) C(k,j) h(j)^n``.
    """
    eta = list(eta)
    while eta and not eta[-1]:
        eta.pop()
    r = len(eta) - 1
    _need(r >= 0, "eta must not be zero")
    _need(0 <= k <= r * n, f"need 0 <= k <= {r * n}, got {k}")

    def h(j):
        return sum((c * falling(j, l) for l, c in enumerate(eta) if c), 0)

    total = 0
    for j in range(k + 1):
        total = total + comb(k, j) * (-1) ** (k - j) * h(j) ** n
    if isinstance(total, Poly):
        return total / factorial(k)
    return _int(Fraction(total, factorial(k)))


def gen_stirling_22(n: int, k: int) -> int:
    """``{n,k}_{2,2}``: coefficient of X^k D^k in (X^2 D^2)^n."""
    _need(0 <= k <= 2 * n, f"need 0 <= k <= {2 * n}")
    return gen_stirling_balanced(n, k, [0, 0, 1])


def gen_stirling_22_via_stirling(n: int, k: int) -> int:
    return sum((-1) ** (n - r) * comb(n, r) * stirling2(n + r, k) for r in range(n + 1) if k <= n + r)


def gen_stirling_rs(n: int, k: int, r: int, s: int) -> int:
    """Coefficient ``{n,k}_{r,s}`` of (X^r D^s)^n.

    For ``r >= s`` it multiplies ``X^(n(r-s)) X^k D^k``.  For ``r < s`` the
    dual statement applies: it multiplies ``X^k D^k D^(n(s-r))``.
    """
    if r < s:
        return gen_stirling_rs(n, k, s, r)
    _need(s >= 1 and n >= 1, "need s >= 1 and n >= 1")
    _need(s <= k <= s * n, f"need {s} <= k <= {s * n}, got {k}")
    total = 0
    for j in range(s, k + 1):
        prod = 1
        for p in range(1, n + 1):
            prod *= falling(j + (p - 1) * (r - s), s)
        total += (-1) ** (k - j) * comb(k, j) * prod
    q, rem = divmod(total, factorial(k))
    if rem:
        raise ArithmeticError("inexact division in gen_stirling_rs")
    return q


# involutions and increasing trees ----------------------------------------------

def involution_coeff(n: int, l: int, m: int, alpha=1, beta=1):
    """Coefficient of X^l D^m in (alpha X + beta D)^n.

    With ``j = (n - l - m)/2`` contractions it is
    ``n! / (2^j j! l! m!) * alpha^(l+j) * beta^(m+j)``.
    """
    _need(n >= 0 and l >= 0 and m >= 0, "indices must be nonnegative")
    rest = n - l - m
    if rest < 0 or rest % 2:
        return 0
    j = rest // 2
    num = factorial(n)
    den = 2 ** j * factorial(j) * factorial(l) * factorial(m)
    return (alpha ** (l + j)) * (beta ** (m + j)) * (num // den)


def involution_coeff_variant(n: int, l: int, m: int, alpha=1, beta=1):
    """Alternative exponent pattern ``alpha^((n+l-m)/2) beta^((n+l+m)/2)``; disagrees with the rewrite engine."""
    rest = n - l - m
    if rest < 0 or rest % 2:
        return 0
    j = rest // 2
    num = factorial(n) // (2 ** j * factorial(j) * factorial(l) * factorial(m))
    return (alpha ** ((n + l - m) // 2)) * (beta ** ((n + l + m) // 2)) * num


def lah(n: int, k: int) -> int:
    """``C(n-1, k-1) n!/k!``: coefficient of X^(n+k) D^k in (X^2 D)^n."""
    _need(1 <= k <= n, f"need 1 <= k <= n, got ({n}, {k})")
    return comb(n - 1, k - 1) * factorial(n) // factorial(k)


def lah_gamma(n: int, k: int, r: int, lower_k: bool = False):
    """Coefficient of X^(k+(r-1)n) D^k in (X^r D)^n.

    ``r = 2`` gives the Lah numbers.  For ``r >= 3`` the alternating sum with
    rational binomials is used; ``lower_k=True`` selects the variant whose
    second binomial has lower index ``k`` instead of ``n``.
    """
    _need(r >= 2, "need r >= 2")
    _need(1 <= k <= n, f"need 1 <= k <= n, got ({n}, {k})")
    if r == 2 and not lower_k:
        return lah(n, k)
    lower = k if lower_k else n
    total = Fraction(0)
    for l in range(k + 1):
        x = Fraction(n) + Fraction(l, r - 1) - 1
        total += (-1) ** (k - l) * comb(k, l) * rational_binom(x, lower)
    return _int(total * (r - 1) ** n * factorial(n) / factorial(k))


def scherk_c(n: int, k: int, p: int) -> int:
    """Scherk's nested product sum for the coefficients of (X^p D)^n.

    ``sum over 1 <= j_1 <= ... <= j_(n-k) <= k`` of
    ``prod_i ((j_i + i - 1) p - (i - 1))``.
    """
    _need(p >= 1 and 1 <= k <= n, f"need p >= 1 and 1 <= k <= n, got ({n}, {k}, {p})")
    total = 0
    for js in itertools.combinations_with_replacement(range(1, k + 1), n - k):
        prod = 1
        for i, j in enumerate(js, start=1):
            prod *= (j + i - 1) * p - (i - 1)
        total += prod
    return total


# q-analogues --------------------------------------------------------------

class QInteger(NamedTuple):
    n: int
    value: object


def q_integer(n: int, q=None) -> QInteger:
    if q is None:
        (q,) = Poly.symbols("q")
    return QInteger(n, q_int(n, q))


def _poly_div_exact(num: List[int], den: List[int]) -> List[int]:
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 0)
    lead = den[0]
    # divide from the low end (den has nonzero constant term)
    for i in range(len(out)):
        c, rem = divmod(num[i], lead)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


def touchard_riordan_list(n: int) -> List[int]:
    """Coefficients (ascending in q) of the crossing polynomial of matchings of 2n points."""
    _need(n >= 0, "need n >= 0")
    deg = n * (n + 1) // 2 + 1
    num = [0] * (deg + 1)
    for k in range(-n, n + 1):
        num[k * (k - 1) // 2] += (-1 if k % 2 else 1) * comb(2 * n, n + k)
    den = [1]
    for _ in range(n):
        den = [a - b for a, b in zip(den + [0], [0] + den)]
    out = _poly_div_exact(num, den)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def touchard_riordan(n: int, q=None):
    """``I_n(q)`` for n chords (2n points), as a polynomial in ``q``."""
    if q is None:
        (q,) = Poly.symbols("q")
    return sum((c * q ** e for e, c in enumerate(touchard_riordan_list(n)) if c), 0)


def matchings(points: int):
    """All perfect matchings of ``range(points)`` as lists of pairs."""
    if points % 2:
        return
    def rec(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for i in range(1, len(rest)):
            for tail in rec(rest[1:i] + rest[i + 1:]):
                yield [(a, rest[i])] + tail
    yield from rec(list(range(points)))


def crossings(matching) -> int:
    c = 0
    for (a, b), (x, y) in itertools.combinations(matching, 2):
        if a < x < b < y or x < a < y < b:
            c += 1
    return c


def chord_crossing_poly(points: int, q=None):
    """Brute-force ``sum q^crossings`` over perfect matchings of ``points`` points."""
    if q is None:
        (q,) = Poly.symbols("q")
    return sum((q ** crossings(mt) for mt in matchings(points)), 0)


# Ehrenfest urn ----------------------------------------------------------------

def _lam(n: int, i: int, j: int) -> int:
    """``[z^n] (1+z)^i (1-z)^j``."""
    return sum(comb(i, t) * comb(j, n - t) * (-1) ** (n - t) for t in range(0, n + 1))


def ehrenfest_prob(m: int, n: int, a0: int, a: int) -> Fraction:
    """Probability of ``a`` balls in chamber A after ``n`` moves, starting from ``a0``."""
    _need(m >= 1 and n >= 0 and 0 <= a0 <= m and 0 <= a <= m, "need m >= 1, n >= 0, 0 <= a0, a <= m")
    b0 = m - a0
    total = Fraction(0)
    for j in range(m + 1):
        total += _lam(j, a0, b0) * _lam(m - a, m - j, j) * Fraction(m - 2 * j, m) ** n
    return total / 2 ** m


def ehrenfest_markov(m: int, n: int, a0: int) -> List[Fraction]:
    """Distribution after ``n`` steps by direct iteration of the chain."""
    dist = [Fraction(0)] * (m + 1)
    dist[a0] = Fraction(1)
    for _ in range(n):
        nxt = [Fraction(0)] * (m + 1)
        for a, p in enumerate(dist):
            if p:
                if a:
                    nxt[a - 1] += p * Fraction(a, m)
                if a < m:
                    nxt[a + 1] += p * Fraction(m - a, m)
        dist = nxt
    return dist


# coupon collector ----------------------------------------------------------------

def coupon_collector(m: int, n: int, group: int = 1) -> Fraction:
    """``P[T <= n]`` for collecting m coupons drawn singly (group 1) or in distinct pairs (group 2)."""
    _need(group in (1, 2), "group must be 1 or 2")
    _need(m >= group and n >= 0, f"need m >= {group} and n >= 0")
    if group == 1:
        return Fraction(factorial(m) * stirling2(n, m), m ** n) if n >= m else Fraction(0)
    if 2 * n < m:
        return Fraction(0)
    return Fraction(factorial(m) * gen_stirling_22(n, m), (m * (m - 1)) ** n)


def coupon_collector_alternating(m: int, n: int, group: int = 1) -> Fraction:
    """Inclusion-exclusion form with sign ``(-1)^(m-k)``."""
    if group == 1:
        return sum((comb(m, k) * (-1) ** (m - k) * Fraction(k, m) ** n for k in range(m + 1)), Fraction(0))
    return sum((comb(m, k) * (-1) ** (m - k) * Fraction(k * (k - 1), m * (m - 1)) ** n
                for k in range(m + 1)), Fraction(0))


def harmonic(m: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, m + 1)), Fraction(0))


def coupon_expected(m: int, group: int = 1) -> Fraction:
    _need(group in (1, 2), "group must be 1 or 2")
    _need(m >= group, f"need m >= {group}")
    if group == 1:
        return m * harmonic(m)
    return Fraction(m * (m - 1), 2 * m - 1) * (
        harmonic(m) + Fraction(1, 2 * m - 1) - Fraction((-1) ** m, (m + 1) * comb(2 * m - 1, m + 1))
    )


def coupon_expected_markov(m: int, group: int = 1) -> Fraction:
    """Expected completion time from the absorbing chain on the number of collected coupons."""
    _need(group in (1, 2) and m >= group, "bad arguments")
    draws = comb(m, group)
    # E[c] = 1 + sum_c' P(c -> c') E[c'], solved from c = m downward
    e = {m: Fraction(0)}
    for c in range(m - 1, -1, -1):
        stay = Fraction(comb(c, group), draws)
        acc = Fraction(1)
        for new in range(1, group + 1):
            p = Fraction(comb(c, group - new) * comb(m - c, new), draws)
            if p:
                acc += p * e[c + new]
        e[c] = acc / (1 - stay)
    return e[0]


# lattice-path counts with closed forms ----------------------------------------------

def duchon(n: int) -> int:
    """``delta_{5n} = sum_i 1/(5n+i+1) C(5n+1, n-i) C(5n+2i, i)``."""
    _need(n >= 0, "need n >= 0")
    total = Fraction(0)
    for i in range(n + 1):
        total += Fraction(comb(5 * n + 1, n - i) * comb(5 * n + 2 * i, i), 5 * n + i + 1)
    return _int(total)


def duchon_variant(n: int) -> Fraction:
    """Variant with ``C(5n+i, n-i)`` as first binomial; not integral, kept to document the mismatch."""
    return sum((Fraction(comb(5 * n + i, n - i) * comb(5 * n + 2 * i, i), 5 * n + i + 1)
                for i in range(n + 1)), Fraction(0))


def matrix_counts(n: int) -> Tuple[int, int]:
    """``(M_n^+-, M_n^+)``: orientation-aware and plain counts of interval-relation matrices."""
    _need(n >= 0, "need n >= 0")
    signed = sum(factorial(k) * gen_stirling_22(n, k) for k in range(0, 2 * n + 1)) if n else 1
    plain, rem = divmod(signed, 2 ** n)
    if rem:
        raise ArithmeticError("M_n^+- not divisible by 2^n")
    return signed, plain


def matrix_brute(n: int) -> Tuple[int, int]:
    """Count matrices directly: rows with one +1 and one -1 (resp. two 1s), no zero column."""
    if n == 0:
        return 1, 1
    signed = plain = 0
    for k in range(2, 2 * n + 1):
        # count row choices over k columns with every column used (inclusion-exclusion)
        s = sum((-1) ** (k - j) * comb(k, j) * (j * (j - 1)) ** n for j in range(k + 1))
        p = sum((-1) ** (k - j) * comb(k, j) * comb(j, 2) ** n for j in range(k + 1))
        signed += s
        plain += p
    return signed, plain


# set partitions ------------------------------------------------------------------

def set_partitions(n: int):
    """All set partitions of ``range(n)`` as lists of blocks (restricted growth strings)."""
    def rec(i, blocks):
        if i == n:
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()
    yield from rec(0, [])


def contiguity_free_partitions(n: int) -> int:
    count = 0
    for p in set_partitions(n):
        where = {}
        for bi, b in enumerate(p):
            for x in b:
                where[x] = bi
        if all(where[j] != where[j + 1] for j in range(n - 1)):
            count += 1
    return count
