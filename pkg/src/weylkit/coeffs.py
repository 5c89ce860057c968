"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` lives in a *context*: an ordered tuple of parameter names
declared when the symbols are created.  Arithmetic mixes freely with
``int`` and :class:`fractions.Fraction`; mixing two polynomials declared
over different parameter tuples raises :class:`ParameterMismatch`, unless
one side has the empty context (a bare constant).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class ParameterMismatch(ValueError):
    """Raised when polynomials from different parameter contexts meet."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _graded_key(e: Exponent):
    return (sum(e), e)


class Poly:
    """Polynomial in the declared parameters with rational coefficients.

    Terms are stored as ``{exponent tuple: coefficient}`` with no zero
    coefficients; iteration goes through :meth:`items`, which is sorted
    in descending graded-lexicographic order.
    """

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] = None, params: Iterable[str] = ()):
        self.params = tuple(params)
        clean: Dict[Exponent, Scalar] = {}
        n = len(self.params)
        for e, c in (terms or {}).items():
            if c:
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match parameters {self.params}")
                clean[tuple(e)] = _norm(c)
        self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, value: Scalar, params: Iterable[str] = ()) -> "Poly":
        params = tuple(params)
        return cls({(0,) * len(params): value}, params)

    @classmethod
    def symbols(cls, names) -> Tuple["Poly", ...]:
        """Declare a context and return one generator per name.

        >>> q, = Poly.symbols("q")
        >>> str(1 + q + q**2)
        'q^2 + q + 1'
        """
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate parameter names")
        gens = []
        for i in range(len(names)):
            e = [0] * len(names)
            e[i] = 1
            gens.append(cls({tuple(e): 1}, names))
        return tuple(gens)

    # predicates -----------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Scalar:
        return self.terms.get((0,) * len(self.params), 0)

    def degree(self, name: str = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        i = self.params.index(name)
        return max(e[i] for e in self.terms)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _graded_key(kv[0]), reverse=True)

    # coercion -------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.params == self.params:
                return other
            if not other.params:
                return Poly.const(other.constant_value(), self.params)
            if not self.params:
                raise _Swap
            raise ParameterMismatch(f"parameters {self.params} vs {other.params}")
        if isinstance(other, Rational):
            return Poly.const(other, self.params)
        return NotImplemented

    def _lift(self, other):
        """Return (a, b) in a common context, or NotImplemented."""
        try:
            o = self._coerce(other)
        except _Swap:
            return Poly.const(self.constant_value(), other.params), other
        if o is NotImplemented:
            return NotImplemented
        return self, o

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(out, a.params)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.params)

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return Poly({}, self.params)
            return Poly({e: c * other for e, c in self.terms.items()}, self.params)
        pair = self._lift(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        out: Dict[Exponent, Scalar] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(out, a.params)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant():
                raise ArithmeticError("division by a non-constant polynomial")
            other = other.constant_value()
        if isinstance(other, Rational):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return Poly({e: Fraction(c) / other for e, c in self.terms.items()}, self.params)
        return NotImplemented

    def __rtruediv__(self, other):
        if not self.is_constant():
            raise ArithmeticError("cannot invert a non-constant polynomial")
        return Fraction(other) / self.constant_value()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = Poly.const(1, self.params)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison -----------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            if other.params == self.params:
                return self.terms == other.terms
            if self.is_constant() and other.is_constant():
                return self.constant_value() == other.constant_value()
            return False
        if isinstance(other, Rational):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    # evaluation -------------------------------------------------------------
    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Substitute some parameters; the result keeps the full context.

        Values may be rationals or polynomials of the same context.
        """
        idx = {name: i for i, name in enumerate(self.params)}
        for name in values:
            if name not in idx:
                raise KeyError(f"unknown parameter {name!r}")
        result = Poly({}, self.params)
        for e, c in self.terms.items():
            kept = list(e)
            factor = Poly.const(c, self.params)
            for name, v in values.items():
                i = idx[name]
                k = kept[i]
                if k:
                    kept[i] = 0
                    factor = factor * (v ** k)
            result = result + factor * Poly({tuple(kept): 1}, self.params)
        return result

    def coefficient(self, monomial: Mapping[str, int]) -> "Poly":
        """Collect the coefficient of ``prod name^k`` over the named parameters.

        The result is a polynomial in the remaining parameters (same context).
        """
        idx = [self.params.index(n) for n in monomial]
        want = list(monomial.values())
        out: Dict[Exponent, Scalar] = {}
        for e, c in self.terms.items():
            if all(e[i] == k for i, k in zip(idx, want)):
                rest = list(e)
                for i in idx:
                    rest[i] = 0
                out[tuple(rest)] = c
        return Poly(out, self.params)

    def univariate(self, name: str) -> list:
        """Coefficient list in one parameter; requires no other parameter."""
        i = self.params.index(name)
        deg = max((e[i] for e in self.terms), default=-1)
        out = [0] * (deg + 1)
        for e, c in self.terms.items():
            if any(x for j, x in enumerate(e) if j != i):
                raise ValueError(f"{self} involves parameters other than {name}")
            out[e[i]] = c
        return out

    def __float__(self):
        if not self.is_constant():
            raise TypeError("non-constant polynomial has no float value")
        return float(self.constant_value())

    # printing -------------------------------------------------------------
    def __str__(self):
        return format_coeff(self)

    def __repr__(self):
        return f"Poly({format_coeff(self)!r}, params={self.params})"


class _Swap(Exception):
    pass


def _format_scalar(c: Scalar) -> str:
    c = _norm(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def format_coeff(c) -> str:
    """Canonical text for a coefficient, e.g. ``3/2*q^2 - 1``."""
    if not isinstance(c, Poly):
        return _format_scalar(c)
    if not c.terms:
        return "0"
    pieces = []
    for e, v in c.items():
        mono = "*".join(
            name if k == 1 else f"{name}^{k}" for name, k in zip(c.params, e) if k
        )
        neg = v < 0
        mag = -v if neg else v
        if mono:
            text = mono if mag == 1 else f"{_format_scalar(mag)}*{mono}"
        else:
            text = _format_scalar(mag)
        pieces.append((neg, text))
    neg, text = pieces[0]
    out = ("-" if neg else "") + text
    for neg, text in pieces[1:]:
        out += (" - " if neg else " + ") + text
    return out


def evaluate(c, values: Mapping[str, object]):
    """Substitute into a coefficient of any kind; scalars pass through."""
    if isinstance(c, Poly):
        relevant = {k: v for k, v in values.items() if k in c.params}
        return c.subs(relevant) if relevant else c
    return c


def as_scalar(c):
    """Collapse constant polynomials to plain rationals."""
    if isinstance(c, Poly) and c.is_constant():
        return c.constant_value()
    return c


def q_int(n: int, q=1):
    """The q-integer ``[n]_q = 1 + q + ... + q^(n-1)`` (0 for n = 0)."""
    if n < 0:
        raise ValueError("q-integers are defined for n >= 0")
    total = 0
    p = 1
    for _ in range(n):
        total = total + p
        p = p * q
    return total


def q_factorial(n: int, q=1):
    out = 1
    for k in range(1, n + 1):
        out = out * q_int(k, q)
    return out
