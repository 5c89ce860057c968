"""Combinatorial oracles: gate grafting, labelled diagrams, crossings and rook placements.

A diagram is built one gate at a time.  Gate ``j`` (labels start at 1) has
``r`` outputs and ``s`` inputs; each input either stays free or is bound to a
still-dangling output ``(label, slot)`` of an earlier gate.  The pair
(number of dangling outputs, number of free inputs) indexes the normal-form
monomial ``X^a D^b`` the diagram contributes to.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .coeffs import Poly
from .errors import BoundExceeded

MAX_DIAGRAM_SIZE = 6
MAX_BASIS_SIZE = 4
MAX_ROOK_GATES = 10


class Gate(NamedTuple):
    r: int
    s: int
    w: object = 1


class GateBasis(tuple):
    """Weighted gate types ``sum w X^r D^s``; (r, s) pairs distinct, (0, 0) excluded."""

    def __new__(cls, gates):
        norm = []
        for g in gates:
            g = Gate(*g) if not isinstance(g, Gate) else g
            if g.r < 0 or g.s < 0 or (g.r, g.s) == (0, 0):
                raise ValueError(f"invalid gate type {(g.r, g.s)}")
            norm.append(g)
        if len({(g.r, g.s) for g in norm}) != len(norm):
            raise ValueError("gate types must be distinct")
        return super().__new__(cls, norm)

    @classmethod
    def of(cls, *pairs) -> "GateBasis":
        return cls(Gate(r, s) for r, s in pairs)

    def operator(self):
        """The normal-ordered operator ``sum w X^r D^s``."""
        from .weyl import NormalForm

        return NormalForm.from_pairs({(g.r, g.s): g.w for g in self})


Binding = Optional[Tuple[int, int]]  # (producer label, output slot) or None when free


@dataclass(frozen=True)
class LabelledDiagram:
    gates: Tuple[Tuple[int, int], ...]            # (r, s) per label 1..n
    bindings: Tuple[Tuple[Binding, ...], ...]     # per gate, one entry per input slot

    @property
    def size(self) -> int:
        return len(self.gates)

    def bound_outputs(self):
        return {b for bs in self.bindings for b in bs if b is not None}

    def shape(self) -> Tuple[int, int]:
        outs = sum(r for r, _ in self.gates) - len(self.bound_outputs())
        free = sum(1 for bs in self.bindings for b in bs if b is None)
        return outs, free

    def weight(self, basis: GateBasis):
        table = {(g.r, g.s): g.w for g in basis}
        out = 1
        for t in self.gates:
            out = out * table[t]
        return out

    def crossings(self) -> int:
        """Crossings in the standard embedding, read off the binding data.

        Dangling outputs sit in a row, the newest gate's outputs leftmost in
        slot order.  Each input (slot order) crossing over ``i`` outputs to
        reach the one it binds adds ``i``; a free input passes all of them.
        """
        hall: List[Tuple[int, int]] = []
        total = 0
        for label, ((r, _), bs) in enumerate(zip(self.gates, self.bindings), start=1):
            for b in bs:
                if b is None:
                    total += len(hall)
                else:
                    i = hall.index(b)
                    total += i
                    del hall[i]
            hall = [(label, o) for o in range(r)] + hall
        return total

    # text form ---------------------------------------------------------
    def dump(self) -> str:
        lines = []
        for label, ((r, s), bs) in enumerate(zip(self.gates, self.bindings), start=1):
            parts = [str(label), f"({r},{s})"]
            for slot, b in enumerate(bs):
                parts.append(f"{slot}<-free" if b is None else f"{slot}<-{b[0]}.{b[1]}")
            lines.append(" ".join(parts))
        return "\n".join(lines)

    @classmethod
    def parse(cls, text: str) -> "LabelledDiagram":
        gates, bindings = [], []
        for expected, line in enumerate((l for l in text.splitlines() if l.strip()), start=1):
            fields = line.split()
            if int(fields[0]) != expected:
                raise ValueError(f"gate labels must run 1, 2, ...; got {fields[0]}")
            r, s = (int(x) for x in fields[1].strip("()").split(","))
            bs = []
            for slot, field in enumerate(fields[2:]):
                idx, src = field.split("<-")
                if int(idx) != slot:
                    raise ValueError(f"input slots out of order in line {line!r}")
                if src == "free":
                    bs.append(None)
                else:
                    lab, out = src.split(".")
                    bs.append((int(lab), int(out)))
            if len(bs) != s:
                raise ValueError(f"gate {expected} declares {s} inputs but lists {len(bs)}")
            gates.append((r, s))
            bindings.append(tuple(bs))
        return cls(tuple(gates), tuple(bindings))

    # contour and rooks -----------------------------------------------------
    def contour(self) -> str:
        """Pinned contour word, latest gate first: ``|X^r D^s|...``."""
        return "".join("|" + "X" * r + "D" * s for r, s in reversed(self.gates))

    def rooks(self) -> Tuple[Optional[int], ...]:
        """One entry per board column (gates in label order, inputs in slot order).

        A bound input puts a rook in the row of its output; rows count the
        outputs of gates 1, 2, ... in slot order, starting at 1.
        """
        offsets = _row_offsets(self.gates)
        out = []
        for bs in self.bindings:
            for b in bs:
                out.append(None if b is None else offsets[b[0] - 1] + b[1] + 1)
        return tuple(out)

    @classmethod
    def from_contour(cls, contour: str, rooks: Sequence[Optional[int]]) -> "LabelledDiagram":
        chunks = contour.split("|")[1:]
        gates = tuple(reversed([(c.count("X"), c.count("D")) for c in chunks]))
        offsets = _row_offsets(gates)
        it = iter(rooks)
        bindings = []
        for r, s in gates:
            bs = []
            for _ in range(s):
                row = next(it)
                if row is None:
                    bs.append(None)
                else:
                    label = max(i for i, off in enumerate(offsets) if off < row) + 1
                    bs.append((label, row - offsets[label - 1] - 1))
            bindings.append(tuple(bs))
        return cls(gates, tuple(bindings))


def _row_offsets(gates) -> List[int]:
    offs, acc = [], 0
    for r, _ in gates:
        offs.append(acc)
        acc += r
    return offs


# ---------------------------------------------------------------------------

def transfer_coefficients(basis: GateBasis, n: int) -> Dict[Tuple[int, int], object]:
    """``c_{n,a,b}`` by adding gates one at a time.

    A new gate (r, s) meeting a diagram with ``a`` dangling outputs binds
    ``t`` of its inputs in ``C(s,t) C(a,t) t!`` ways.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    state: Dict[Tuple[int, int], object] = {(0, 0): 1}
    for _ in range(n):
        nxt: Dict[Tuple[int, int], object] = {}
        for (a, b), c in state.items():
            for g in basis:
                for t in range(min(g.s, a) + 1):
                    mult = comb(g.s, t) * comb(a, t) * factorial(t)
                    key = (g.r + a - t, g.s + b - t)
                    nxt[key] = nxt.get(key, 0) + c * g.w * mult
        state = {k: v for k, v in nxt.items() if v}
    return state


def _check_bounds(basis: GateBasis, n: int, max_size: int):
    if n > max_size:
        raise BoundExceeded("diagram enumeration size", n, max_size)
    if len(basis) > MAX_BASIS_SIZE:
        raise BoundExceeded("diagram enumeration basis size", len(basis), MAX_BASIS_SIZE)


def iter_diagrams(basis: GateBasis, n: int, max_size: int = MAX_DIAGRAM_SIZE) -> Iterator[LabelledDiagram]:
    """Every labelled diagram with ``n`` gates, generated by recursive grafting."""
    _check_bounds(basis, n, max_size)
    types = [(g.r, g.s) for g in basis]

    def bind(slots: int, hall: List[Tuple[int, int]]):
        # all ways to assign each input slot to free or a distinct dangling output
        if slots == 0:
            yield ()
            return
        for rest in bind(slots - 1, hall):
            used = set(rest)
            yield (None,) + rest
            for out in hall:
                if out not in used:
                    yield (out,) + rest

    def rec(gates, bindings, hall):
        if len(gates) == n:
            yield LabelledDiagram(tuple(gates), tuple(bindings))
            return
        label = len(gates) + 1
        for r, s in types:
            for bs in bind(s, hall):
                bound = {b for b in bs if b is not None}
                new_hall = [h for h in hall if h not in bound] + [(label, o) for o in range(r)]
                yield from rec(gates + [(r, s)], bindings + [bs], new_hall)

    yield from rec([], [], [])


def enumerate_diagrams(basis: GateBasis, n: int, shape: Tuple[int, int] = None,
                       max_size: int = MAX_DIAGRAM_SIZE):
    """All labelled diagrams (optionally only those of a given shape) and their total weight."""
    found = []
    total = 0
    for d in iter_diagrams(basis, n, max_size):
        if shape is None or d.shape() == tuple(shape):
            found.append(d)
            total = total + d.weight(basis)
    return found, total


def diagram_totals(basis: GateBasis, n: int, max_size: int = MAX_DIAGRAM_SIZE) -> Dict[Tuple[int, int], object]:
    out: Dict[Tuple[int, int], object] = {}
    for d in iter_diagrams(basis, n, max_size):
        k = d.shape()
        out[k] = out.get(k, 0) + d.weight(basis)
    return {k: v for k, v in out.items() if v}


def crossing_weighted_count(basis: GateBasis, n: int, shape: Tuple[int, int], q=None,
                            max_size: int = MAX_DIAGRAM_SIZE):
    """``sum w q^crossings`` over diagrams of the given shape."""
    if q is None:
        (q,) = Poly.symbols("q")
    total = 0
    for d in iter_diagrams(basis, n, max_size):
        if d.shape() == tuple(shape):
            total = total + d.weight(basis) * q ** d.crossings()
    return total


# ---------------------------------------------------------------------------
# connected components

def components(d: LabelledDiagram) -> List[List[int]]:
    """Connected components as sorted lists of gate labels."""
    parent = list(range(d.size + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for label, bs in enumerate(d.bindings, start=1):
        for b in bs:
            if b is not None:
                parent[find(label)] = find(b[0])
    groups: Dict[int, List[int]] = {}
    for label in range(1, d.size + 1):
        groups.setdefault(find(label), []).append(label)
    return sorted(groups.values())


def component_shape(d: LabelledDiagram, labels: Sequence[int]) -> Tuple[int, int]:
    labels = set(labels)
    bound = d.bound_outputs()
    outs = sum(1 for l in labels for o in range(d.gates[l - 1][0]) if (l, o) not in bound)
    free = sum(1 for l in labels for b in d.bindings[l - 1] if b is None)
    return outs, free


def connected_counts(basis: GateBasis, n: int, max_size: int = MAX_DIAGRAM_SIZE) -> Dict[Tuple[int, int], int]:
    """Numbers of connected diagrams of size ``n``, keyed by (dangling outputs, free inputs)."""
    out: Dict[Tuple[int, int], int] = {}
    for d in iter_diagrams(basis, n, max_size):
        comps = components(d)
        if len(comps) == 1:
            k = component_shape(d, comps[0])
            out[k] = out.get(k, 0) + d.weight(basis)
    return out


# ---------------------------------------------------------------------------
# Ferrers boards and rooks

class FerrersBoard:
    """Board whose columns are the D letters of a gate sequence (label order).

    The column of an input of gate ``j`` has height ``sum_{i<j} r_i``: it can
    hold a rook in the row of any output produced before gate ``j``.
    """

    def __init__(self, gates: Sequence[Tuple[int, int]]):
        self.gates = tuple(tuple(g) for g in gates)
        offs = _row_offsets(self.gates)
        self.heights = tuple(offs[j] for j, (_, s) in enumerate(self.gates) for _ in range(s))
        self.rows = sum(r for r, _ in self.gates)

    @property
    def columns(self) -> int:
        return len(self.heights)

    def contour(self) -> str:
        return "".join("|" + "X" * r + "D" * s for r, s in reversed(self.gates))

    def cells(self):
        return {(c, row) for c, h in enumerate(self.heights) for row in range(1, h + 1)}

    def rook_numbers(self) -> List[int]:
        """``r_k``: placements of k non-attacking rooks (columns sorted by height)."""
        dp = [1]
        for h in sorted(self.heights):
            nxt = dp + [0]
            for k in range(1, len(nxt)):
                avail = h - (k - 1)
                if avail > 0:
                    nxt[k] += dp[k - 1] * avail
            dp = nxt
        return dp

    def rook_numbers_brute(self) -> List[int]:
        counts = [0] * (self.columns + 1)

        def rec(c, used, k):
            if c == self.columns:
                counts[k] += 1
                return
            rec(c + 1, used, k)
            for row in range(1, self.heights[c] + 1):
                if row not in used:
                    rec(c + 1, used | {row}, k + 1)

        rec(0, frozenset(), 0)
        return counts


def rook_count(gates: Sequence[Tuple[int, int]], free_rows: int, free_cols: int,
               max_gates: int = MAX_ROOK_GATES) -> int:
    """Non-attacking rook placements leaving ``free_rows`` rows and ``free_cols`` columns empty."""
    if len(gates) > max_gates:
        raise BoundExceeded("rook board gate count", len(gates), max_gates)
    board = FerrersBoard(gates)
    k = board.rows - free_rows
    if k < 0 or board.columns - free_cols != k:
        return 0
    nums = board.rook_numbers()
    return nums[k] if k < len(nums) else 0


def rook_totals(basis: GateBasis, n: int, max_gates: int = MAX_ROOK_GATES) -> Dict[Tuple[int, int], object]:
    """``sum over gate sequences`` of weighted rook counts, keyed by (free rows, free columns)."""
    if n > max_gates:
        raise BoundExceeded("rook board gate count", n, max_gates)
    out: Dict[Tuple[int, int], object] = {}
    for seq in itertools.product(basis, repeat=n):
        gates = [(g.r, g.s) for g in seq]
        w = 1
        for g in seq:
            w = w * g.w
        board = FerrersBoard(gates)
        for k, cnt in enumerate(board.rook_numbers()):
            if cnt:
                key = (board.rows - k, board.columns - k)
                out[key] = out.get(key, 0) + w * cnt
    return {k: v for k, v in out.items() if v}
