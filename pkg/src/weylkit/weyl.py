"""Operator polynomials in raising (X) and lowering (D) letters, and normal ordering.

The undeformed relation is ``D X = X D + 1``.  With a deformation ``q`` the
lowering letter behaves like a q-difference operator and the relation becomes
``D X = 1 + q X D``.  Letters of different modes commute.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterable, List, Mapping, NamedTuple, Tuple

from .coeffs import Poly, format_coeff, q_int
from .errors import BoundExceeded, DeformationError, ModeError

WICK_MAX_LEN = 14


class Kind(Enum):
    RAISE = "X"
    LOWER = "D"

    def flip(self) -> "Kind":
        return Kind.LOWER if self is Kind.RAISE else Kind.RAISE


class Letter(NamedTuple):
    kind: Kind
    mode: int = 0

    def __str__(self):
        return self.kind.value + (str(self.mode) if self.mode else "")


Word = Tuple[Letter, ...]
# per-mode exponent pairs: ((a_0, b_0), (a_1, b_1), ...)
Monomial = Tuple[Tuple[int, int], ...]


def word(text: str, mode: int = 0) -> Word:
    """Build a single-mode word from a string over ``X``/``D`` (``B``/``A`` also accepted)."""
    kinds = {"X": Kind.RAISE, "B": Kind.RAISE, "D": Kind.LOWER, "A": Kind.LOWER}
    return tuple(Letter(kinds[c], mode) for c in text if not c.isspace())


def _is_one(q) -> bool:
    return q == 1


class OperatorPolynomial:
    """A finite linear combination of words.  Immutable by convention."""

    __slots__ = ("terms", "modes", "q")

    def __init__(self, terms: Mapping[Word, object] = None, modes: int = 1, q=1):
        if modes < 1:
            raise ModeError("mode count must be positive")
        clean: Dict[Word, object] = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            for letter in w:
                if not 0 <= letter.mode < modes:
                    raise ModeError(f"letter {letter} uses mode {letter.mode} but only {modes} declared")
            if c:
                clean[w] = clean.get(w, 0) + c
                if not clean[w]:
                    del clean[w]
        self.terms = clean
        self.modes = modes
        self.q = q

    @classmethod
    def letter(cls, kind: Kind, mode: int = 0, modes: int = None, q=1):
        return cls({(Letter(kind, mode),): 1}, modes or mode + 1, q)

    @classmethod
    def from_word(cls, w, modes: int = None, q=1, coeff=1):
        if isinstance(w, str):
            w = word(w)
        w = tuple(w)
        if modes is None:
            modes = 1 + max((l.mode for l in w), default=0)
        return cls({w: coeff}, modes, q)

    @classmethod
    def scalar(cls, c, modes: int = 1, q=1):
        return cls({(): c}, modes, q)

    def _widen(self, modes: int) -> "OperatorPolynomial":
        return self if modes == self.modes else OperatorPolynomial(self.terms, modes, self.q)

    def _align(self, other):
        if not isinstance(other, OperatorPolynomial):
            return self, OperatorPolynomial.scalar(other, self.modes, self.q)
        if self.q != other.q:
            raise DeformationError(
                f"deformations differ: {format_coeff(self.q)} vs {format_coeff(other.q)}")
        m = max(self.modes, other.modes)
        return self._widen(m), other._widen(m)

    def __add__(self, other):
        a, b = self._align(other)
        out = dict(a.terms)
        for w, c in b.terms.items():
            out[w] = out.get(w, 0) + c
        return OperatorPolynomial(out, a.modes, a.q)

    __radd__ = __add__

    def __neg__(self):
        return OperatorPolynomial({w: -c for w, c in self.terms.items()}, self.modes, self.q)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._align(other)
        out: Dict[Word, object] = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return OperatorPolynomial(out, a.modes, a.q)

    def __rmul__(self, other):
        return OperatorPolynomial.scalar(other, self.modes, self.q) * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = OperatorPolynomial.scalar(1, self.modes, self.q)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, OperatorPolynomial):
            return NotImplemented
        return self.modes == other.modes and self.q == other.q and self.terms == other.terms

    def __hash__(self):
        return hash((self.modes, frozenset(self.terms.items())))

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), [str(l) for l in kv[0]])):
            parts.append(f"{format_coeff(c)}*{''.join(map(str, w)) or '1'}")
        return " + ".join(parts)


def X(mode: int = 0, modes: int = None, q=1) -> OperatorPolynomial:
    return OperatorPolynomial.letter(Kind.RAISE, mode, modes, q)


def D(mode: int = 0, modes: int = None, q=1) -> OperatorPolynomial:
    return OperatorPolynomial.letter(Kind.LOWER, mode, modes, q)


def _mono_key(m: Monomial):
    xs = tuple(a for a, _ in m)
    ds = tuple(b for _, b in m)
    return (sum(xs) + sum(ds), tuple(-v for v in xs + ds))


class NormalForm:
    """Normal-ordered operator: ``{((a_0,b_0),...): coeff}`` meaning prod_j X_j^a_j D_j^b_j."""

    __slots__ = ("terms", "modes", "q")

    def __init__(self, terms: Mapping[Monomial, object] = None, modes: int = 1, q=1):
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(tuple(p) for p in m)
            if len(m) != modes:
                raise ModeError(f"monomial {m} does not have {modes} modes")
            if c:
                clean[m] = c
        self.terms = clean
        self.modes = modes
        self.q = q

    @classmethod
    def identity(cls, modes: int = 1, q=1) -> "NormalForm":
        return cls({((0, 0),) * modes: 1}, modes, q)

    @classmethod
    def monomial(cls, a: int, b: int, coeff=1, q=1) -> "NormalForm":
        """Single-mode ``coeff * X^a D^b``."""
        return cls({((a, b),): coeff}, 1, q)

    @classmethod
    def from_pairs(cls, pairs: Mapping[Tuple[int, int], object], q=1) -> "NormalForm":
        """Single-mode constructor from ``{(a, b): coeff}``."""
        return cls({((a, b),): c for (a, b), c in pairs.items()}, 1, q)

    def items(self) -> List[Tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def coeff(self, *key):
        """Coefficient lookup.  ``nf.coeff(a, b)`` for one mode, or a full monomial."""
        if len(key) == 2 and all(isinstance(k, int) for k in key):
            key = ((key[0], key[1]),)
        elif len(key) == 1:
            key = tuple(tuple(p) for p in key[0])
        return self.terms.get(key, 0)

    def pairs(self) -> Dict[Tuple[int, int], object]:
        """Single-mode view ``{(a, b): coeff}``."""
        if self.modes != 1:
            raise ModeError("pairs() needs a single-mode normal form")
        return {m[0]: c for m, c in self.terms.items()}

    def to_operator(self) -> OperatorPolynomial:
        out = {}
        for m, c in self.terms.items():
            w = []
            for j, (a, _) in enumerate(m):
                w += [Letter(Kind.RAISE, j)] * a
            for j, (_, b) in enumerate(m):
                w += [Letter(Kind.LOWER, j)] * b
            out[tuple(w)] = c
        return OperatorPolynomial(out, self.modes, self.q)

    def map_coeffs(self, fn) -> "NormalForm":
        return NormalForm({m: fn(c) for m, c in self.terms.items()}, self.modes, self.q)

    def __add__(self, other: "NormalForm") -> "NormalForm":
        _same_ctx(self, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return NormalForm(out, self.modes, self.q)

    def scale(self, c) -> "NormalForm":
        return NormalForm({m: v * c for m, v in self.terms.items()}, self.modes, self.q)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        if not isinstance(other, NormalForm):
            return self.scale(other)
        _same_ctx(self, other)
        return _compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.modes == other.modes and self.q == other.q and self.terms == other.terms

    def __hash__(self):
        return hash((self.modes, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.items():
            letters = []
            for kind, idx in (("X", 0), ("D", 1)):
                for j, pair in enumerate(m):
                    e = pair[idx]
                    name = kind + (str(j) if self.modes > 1 else "")
                    if e == 1:
                        letters.append(name)
                    elif e > 1:
                        letters.append(f"{name}^{e}")
            mono = "*".join(letters)
            text = format_coeff(c)
            if not mono:
                parts.append(text)
            elif text == "1":
                parts.append(mono)
            else:
                parts.append(f"({text})*{mono}" if " " in text else f"{text}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


def _same_ctx(a: NormalForm, b: NormalForm):
    if a.modes != b.modes:
        raise ModeError(f"mode counts differ: {a.modes} vs {b.modes}")
    if a.q != b.q:
        raise DeformationError(f"deformations differ: {format_coeff(a.q)} vs {format_coeff(b.q)}")


# ---------------------------------------------------------------------------
# single-mode rewriting on words encoded as strings over "X"/"D"


def _reduce_mode(w: str, q, strategy: str) -> Dict[Tuple[int, int], object]:
    """Rewrite one mode's word to normal form by repeated ``DX -> 1 + q XD``."""
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    find = str.find if strategy == "leftmost" else str.rfind
    pending: Dict[str, object] = {w: 1}
    done: Dict[Tuple[int, int], object] = {}
    while pending:
        # longest words first so that shorter descendants merge before expansion
        cur = max(pending, key=len)
        c = pending.pop(cur)
        if not c:
            continue
        i = find(cur, "DX")
        if i < 0:
            key = (cur.count("X"), cur.count("D"))
            done[key] = done.get(key, 0) + c
            continue
        shorter = cur[:i] + cur[i + 2:]
        swapped = cur[:i] + "XD" + cur[i + 2:]
        pending[shorter] = pending.get(shorter, 0) + c
        pending[swapped] = pending.get(swapped, 0) + c * q
    return {k: v for k, v in done.items() if v}


def _split_modes(w: Word, modes: int) -> List[str]:
    per = [[] for _ in range(modes)]
    for letter in w:
        per[letter.mode].append(letter.kind.value)
    return ["".join(p) for p in per]


def _tensor(parts: List[Dict[Tuple[int, int], object]]) -> Dict[Monomial, object]:
    acc: Dict[Monomial, object] = {(): 1}
    for part in parts:
        nxt = {}
        for m, c in acc.items():
            for pair, v in part.items():
                key = m + (pair,)
                nxt[key] = nxt.get(key, 0) + c * v
        acc = nxt
    return acc


def normal_order(p, strategy: str = "leftmost") -> NormalForm:
    """Normal form of an operator polynomial (or a bare word / word string).

    Every occurrence of a lowering letter immediately left of a raising letter
    of the same mode is rewritten until none remain.  ``strategy`` picks which
    occurrence goes first; the result does not depend on it.
    """
    if isinstance(p, NormalForm):
        return p
    if not isinstance(p, OperatorPolynomial):
        p = OperatorPolynomial.from_word(p)
    out: Dict[Monomial, object] = {}
    cache: Dict[str, Dict] = {}
    for w, c in p.terms.items():
        parts = []
        for sub in _split_modes(w, p.modes):
            if sub not in cache:
                cache[sub] = _reduce_mode(sub, p.q, strategy)
            parts.append(cache[sub])
        for m, v in _tensor(parts).items():
            out[m] = out.get(m, 0) + c * v
    return NormalForm({m: v for m, v in out.items() if v}, p.modes, p.q)


# ---------------------------------------------------------------------------
# composition of normal forms


@lru_cache(maxsize=None)
def _swap_classical(s: int, a: int) -> Tuple[Tuple[int, int], ...]:
    """``D^s X^a = sum_t C(s,t) C(a,t) t! X^(a-t) D^(s-t)`` as (t, multiplicity)."""
    return tuple((t, comb(s, t) * comb(a, t) * factorial(t)) for t in range(min(s, a) + 1))


class _DeformedSwaps:
    """Cache of ``D^s X^a`` normal forms for a fixed deformation."""

    def __init__(self, q):
        self.q = q
        self.cache: Dict[Tuple[int, int], Dict[Tuple[int, int], object]] = {}

    def get(self, s: int, a: int):
        key = (s, a)
        if key not in self.cache:
            if s == 0 or a == 0:
                self.cache[key] = {(a, s): 1}
            else:
                # D^s X^a = D^(s-1) (D X) X^(a-1) = D^(s-1) X^(a-1) + q D^(s-1) X D X^(a-1);
                # cheaper: D^s X^a = (D^s X) X^(a-1), with D^s X = [s] D^(s-1) + q^s X D^s
                out: Dict[Tuple[int, int], object] = {}
                qs = self.q ** s
                for (x, d), c in self.get(s - 1, a - 1).items():
                    out[(x, d)] = out.get((x, d), 0) + c * q_int(s, self.q)
                for (x, d), c in self.get(s, a - 1).items():
                    out[(x + 1, d)] = out.get((x + 1, d), 0) + c * qs
                self.cache[key] = {k: v for k, v in out.items() if v}
        return self.cache[key]


_DEFORMED: Dict[object, _DeformedSwaps] = {}


def _swaps_for(q) -> _DeformedSwaps:
    key = (q.params, frozenset(q.terms.items())) if isinstance(q, Poly) else q
    if key not in _DEFORMED:
        _DEFORMED[key] = _DeformedSwaps(q)
    return _DEFORMED[key]


def _compose_pairs(r: int, s: int, a: int, b: int, q) -> List[Tuple[Tuple[int, int], object]]:
    """Normal form of ``(X^r D^s)(X^a D^b)``."""
    if _is_one(q):
        return [((r + a - t, s + b - t), m) for t, m in _swap_classical(s, a)]
    return [((r + x, d + b), c) for (x, d), c in _swaps_for(q).get(s, a).items()]


def _compose(left: NormalForm, right: NormalForm) -> NormalForm:
    out: Dict[Monomial, object] = {}
    q = left.q
    for m1, c1 in left.terms.items():
        for m2, c2 in right.terms.items():
            parts = [dict(_compose_pairs(r, s, a, b, q)) for (r, s), (a, b) in zip(m1, m2)]
            c = c1 * c2
            for m, v in _tensor(parts).items():
                out[m] = out.get(m, 0) + c * v
    return NormalForm({m: v for m, v in out.items() if v}, left.modes, q)


def power_normal_order(h, n: int) -> NormalForm:
    """Normal form of ``h^n`` built by ``n`` left-multiplications by ``h``."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    h = normal_order(h)
    acc = NormalForm.identity(h.modes, h.q)
    for _ in range(n):
        acc = _compose(h, acc)
    return acc


def exp_normal_order(h, order: int) -> List[NormalForm]:
    """``[N(h^0), ..., N(h^order)]``: the z^n/n! coefficients of N(exp(z h))."""
    h = normal_order(h)
    out = [NormalForm.identity(h.modes, h.q)]
    for _ in range(order):
        out.append(_compose(h, out[-1]))
    return out


def constant_term(nf: NormalForm):
    return nf.terms.get(((0, 0),) * nf.modes, 0)


def dual(p: OperatorPolynomial) -> OperatorPolynomial:
    """Anti-automorphism exchanging X and D (word reversed, kinds flipped)."""
    if isinstance(p, NormalForm):
        p = p.to_operator()
    if not _is_one(p.q):
        raise DeformationError("duality is only defined for the undeformed relation (q = 1)")
    return OperatorPolynomial(
        {tuple(Letter(l.kind.flip(), l.mode) for l in reversed(w)): c for w, c in p.terms.items()},
        p.modes, p.q)


# ---------------------------------------------------------------------------
# action on commutative polynomials


def apply_to_polynomial(p, f: Mapping[Tuple[int, ...], object]) -> Dict[Tuple[int, ...], object]:
    """Apply an operator to ``f = {(m_1, ..., m_r): coeff}`` (x_j^m_j monomials).

    X_j multiplies by x_j; D_j differentiates in x_j, or for q != 1 acts by
    ``x^n -> [n]_q x^(n-1)``.
    """
    if isinstance(p, NormalForm):
        p = p.to_operator()
    elif not isinstance(p, OperatorPolynomial):
        p = OperatorPolynomial.from_word(p)
    q = p.q
    out: Dict[Tuple[int, ...], object] = {}
    for w, c in p.terms.items():
        cur = {tuple(e): v for e, v in f.items()}
        for letter in reversed(w):
            nxt: Dict[Tuple[int, ...], object] = {}
            j = letter.mode
            for e, v in cur.items():
                if len(e) != p.modes:
                    raise ModeError(f"polynomial monomial {e} does not have {p.modes} variables")
                e2 = list(e)
                if letter.kind is Kind.RAISE:
                    e2[j] += 1
                    mult = 1
                else:
                    if e[j] == 0:
                        continue
                    mult = e[j] if _is_one(q) else q_int(e[j], q)
                    e2[j] -= 1
                k = tuple(e2)
                nxt[k] = nxt.get(k, 0) + v * mult
            cur = {k: v for k, v in nxt.items() if v}
        for e, v in cur.items():
            out[e] = out.get(e, 0) + c * v
    return {e: v for e, v in out.items() if v}


# ---------------------------------------------------------------------------
# Wick contractions


def wick_normal_order(w, max_len: int = WICK_MAX_LEN) -> NormalForm:
    """Normal form via the sum over all sets of disjoint D...X contractions."""
    if isinstance(w, str):
        w = word(w)
    w = tuple(w)
    if any(l.mode for l in w):
        raise ModeError("wick_normal_order handles a single mode")
    if len(w) > max_len:
        raise BoundExceeded("wick_normal_order word length", len(w), max_len)
    kinds = [l.kind for l in w]
    n_x = kinds.count(Kind.RAISE)
    n_d = len(kinds) - n_x
    out: Dict[Tuple[int, int], int] = {}

    # scan left to right: each D either stays or opens a pending contraction;
    # each X either stays or closes one specific pending D.  Every contraction
    # set is produced exactly once; pending D's left at the end are discarded.
    def walk(i: int, pending: Tuple[int, ...], pairs: int):
        if i == len(kinds):
            if not pending:
                key = (n_x - pairs, n_d - pairs)
                out[key] = out.get(key, 0) + 1
            return
        if kinds[i] is Kind.LOWER:
            walk(i + 1, pending, pairs)
            walk(i + 1, pending + (i,), pairs)
        else:
            walk(i + 1, pending, pairs)
            for k in range(len(pending)):
                walk(i + 1, pending[:k] + pending[k + 1:], pairs + 1)

    walk(0, (), 0)
    return NormalForm.from_pairs(out)
