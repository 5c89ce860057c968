import itertools

import pytest

from weylkit import BoundExceeded, Poly, normal_order, power_normal_order
from weylkit.diagrams import (
    FerrersBoard, Gate, GateBasis, LabelledDiagram, components, connected_counts, crossing_weighted_count,
    diagram_totals, enumerate_diagrams, iter_diagrams, rook_count, rook_totals, transfer_coefficients,
)
from weylkit.numbers import bell, stirling2, touchard_riordan
from weylkit.parser import parse_operator
from weylkit.series import cos_series, sec_series, tan_series

Q, = Poly.symbols("q")

BASES = [
    ((1, 1),),
    ((1, 0), (0, 1)),
    ((2, 0), (0, 2)),
    ((2, 1),),
    ((2, 2),),
    ((1, 1), (1, 0), (0, 1)),
]


def rewrite(basis, n, q=1):
    op = sum((parse_operator(f"X^{g.r}*D^{g.s}", q) for g in basis[1:]),
             parse_operator(f"X^{basis[0].r}*D^{basis[0].s}", q))
    return power_normal_order(normal_order(op), n).pairs()


def test_gate_basis_validation():
    with pytest.raises(ValueError):
        GateBasis.of((0, 0))
    with pytest.raises(ValueError):
        GateBasis.of((1, 1), (1, 1))
    assert GateBasis([Gate(2, 1, 3)]).operator().pairs() == {(2, 1): 3}


def test_transfer_examples():
    assert transfer_coefficients(GateBasis.of((1, 1)), 3) == {(1, 1): 1, (2, 2): 3, (3, 3): 1}
    assert transfer_coefficients(GateBasis.of((1, 0), (0, 1)), 2) == {(0, 0): 1, (2, 0): 1, (1, 1): 2, (0, 2): 1}
    for pairs in BASES:
        assert transfer_coefficients(GateBasis.of(*pairs), 0) == {(0, 0): 1}


@pytest.mark.parametrize("pairs", BASES)
def test_transfer_matches_rewrite(pairs):
    basis = GateBasis.of(*pairs)
    for n in range(10):
        assert transfer_coefficients(basis, n) == rewrite(basis, n)


def test_transfer_weighted():
    a, b = Poly.symbols("a b")
    basis = GateBasis([Gate(2, 1, a), Gate(0, 1, b)])
    h = normal_order(parse_operator("a*X^2*D + b*D"))
    for n in range(6):
        assert transfer_coefficients(basis, n) == power_normal_order(h, n).pairs()


@pytest.mark.parametrize("pairs", BASES)
def test_enumeration_matches_transfer(pairs):
    basis = GateBasis.of(*pairs)
    for n in range(6):
        assert diagram_totals(basis, n) == transfer_coefficients(basis, n)


def test_enumeration_examples():
    _, total = enumerate_diagrams(GateBasis.of((2, 1)), 2)
    assert total == 3
    found, total = enumerate_diagrams(GateBasis.of((1, 1)), 4, shape=(2, 2))
    assert total == len(found) == stirling2(4, 2) == 7
    found, total = enumerate_diagrams(GateBasis.of((1, 1)), 0)
    assert len(found) == 1 and found[0].size == 0 and total == 1


def test_tree_counts():
    x2d = [enumerate_diagrams(GateBasis.of((2, 1)), n)[1] for n in range(5)]
    assert x2d == [1, 1, 3, 13, 73]
    x3d = [enumerate_diagrams(GateBasis.of((3, 1)), n)[1] for n in range(4)]
    assert x3d == [1, 1, 4, 25]


def test_enumeration_bounds():
    with pytest.raises(BoundExceeded, match="size 7 exceeds the configured bound 6"):
        enumerate_diagrams(GateBasis.of((1, 1)), 7)
    with pytest.raises(BoundExceeded):
        enumerate_diagrams(GateBasis.of((1, 1), (1, 0), (0, 1), (2, 0), (0, 2)), 1)
    assert len(enumerate_diagrams(GateBasis.of((1, 1)), 7, max_size=7)[0]) == bell(7)


# crossings -------------------------------------------------------------------------

def test_crossing_examples():
    basis = GateBasis.of((1, 0), (0, 1))
    assert crossing_weighted_count(basis, 4, (0, 0), Q) == 2 + Q
    # (X Delta)^2 = X Delta + q X^2 Delta^2
    assert crossing_weighted_count(GateBasis.of((1, 1)), 2, (1, 1), Q) == 1
    assert crossing_weighted_count(GateBasis.of((1, 1)), 2, (2, 2), Q) == Q


def test_permutation_inversions():
    # X^3 then D^3: a full matching is a permutation of the three dangling outputs,
    # and crossings equal its inversions (outputs read in hall order, newest first)
    basis = GateBasis.of((1, 0), (0, 1))
    seen = 0
    for d in iter_diagrams(basis, 6):
        if d.gates == ((1, 0),) * 3 + ((0, 1),) * 3 and d.shape() == (0, 0):
            hall_pos = [3 - bs[0][0] for bs in d.bindings[3:]]
            inv = sum(1 for i, j in itertools.combinations(range(3), 2) if hall_pos[i] > hall_pos[j])
            assert d.crossings() == inv
            seen += 1
    assert seen == 6


@pytest.mark.parametrize("pairs", BASES)
def test_crossing_matches_q_rewrite(pairs):
    basis = GateBasis.of(*pairs)
    for n in range(6):
        target = rewrite(basis, n, Q)
        for shape, c in target.items():
            assert crossing_weighted_count(basis, n, shape, Q) == c


@pytest.mark.parametrize("pairs", BASES)
def test_crossing_at_q_one(pairs):
    basis = GateBasis.of(*pairs)
    for n in range(5):
        totals = diagram_totals(basis, n)
        for shape, c in totals.items():
            assert crossing_weighted_count(basis, n, shape, 1) == c


def test_crossing_touchard():
    basis = GateBasis.of((1, 0), (0, 1))
    for chords in range(5):
        assert crossing_weighted_count(basis, 2 * chords, (0, 0), Q, max_size=8) == touchard_riordan(chords, Q)


# connected components --------------------------------------------------------------------

def test_zigzag_components():
    basis = GateBasis.of((2, 0), (0, 2))
    order = 6
    tan2 = tan_series(order, 2).egf()
    sec2 = sec_series(order, 2).egf()
    logcos = (cos_series(order, 2).log()).egf()
    for n in range(1, order + 1):
        counts = connected_counts(basis, n)
        assert counts.get((2, 0), 0) == counts.get((0, 2), 0) == tan2[n] / 2
        assert counts.get((1, 1), 0) == sec2[n]
        assert counts.get((0, 0), 0) == -logcos[n] / 2
        assert set(counts) <= {(2, 0), (0, 2), (1, 1), (0, 0)}
    assert connected_counts(basis, 3)[(2, 0)] == 8


def test_components_of_disconnected():
    d = LabelledDiagram(((1, 1), (1, 1), (1, 1)), ((None,), ((1, 0),), (None,)))
    assert components(d) == [[1, 2], [3]]


# serialization and contours --------------------------------------------------------------

def test_dump_format():
    d = LabelledDiagram(((2, 1), (2, 1)), ((None,), ((1, 1),)))
    assert d.dump() == "1 (2,1) 0<-free\n2 (2,1) 0<-1.1"
    assert LabelledDiagram.parse(d.dump()) == d


def test_parse_rejects_bad_text():
    with pytest.raises(ValueError):
        LabelledDiagram.parse("2 (1,1) 0<-free")
    with pytest.raises(ValueError):
        LabelledDiagram.parse("1 (1,2) 0<-free")


@pytest.mark.parametrize("pairs", BASES)
def test_round_trips(pairs):
    basis = GateBasis.of(*pairs)
    for n in range(5):
        for d in iter_diagrams(basis, n):
            assert LabelledDiagram.parse(d.dump()) == d
            assert LabelledDiagram.from_contour(d.contour(), d.rooks()) == d


def test_contour_keeps_pins():
    d = LabelledDiagram(((1, 0), (0, 1)), ((), ((1, 0),)))
    assert d.contour() == "|D|X"
    assert d.rooks() == (1,)


# rooks -----------------------------------------------------------------------------

def test_rook_examples():
    seq = [(1, 1)] * 3
    assert [rook_count(seq, k, k) for k in (1, 2, 3)] == [1, 3, 1]
    assert rook_count([], 0, 0) == 1
    assert sum(rook_totals(GateBasis.of((2, 2)), 2).values()) == 7


def test_rook_numbers_brute():
    for gates in [[(1, 1)] * 4, [(2, 2), (1, 3), (3, 1)], [(2, 1), (0, 2), (1, 1)]]:
        board = FerrersBoard(gates)
        assert board.rook_numbers() == board.rook_numbers_brute()


@pytest.mark.parametrize("pairs", [((1, 1),), ((2, 2),), ((2, 1), (1, 0))])
def test_rook_totals_match_transfer(pairs):
    basis = GateBasis.of(*pairs)
    for n in range(5):
        assert rook_totals(basis, n) == transfer_coefficients(basis, n)


def test_rook_bound():
    with pytest.raises(BoundExceeded):
        rook_count([(1, 1)] * 11, 0, 0)
