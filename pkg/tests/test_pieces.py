import random
from math import inf

import pytest
from hypothesis import given, settings, strategies as st

from smallcancel.distortion import gen_distorted_family
from smallcancel.graph import PathSpec, cycle_graph, disjoint_union, find_occurrences, gamma_R
from smallcancel.pieces import (NotDecomposable, PieceIndex, RelatorPieces, min_piece_decomposition,
                                piece_distance, support)
from smallcancel.conditions import relator_classes
from smallcancel.words import Letter

from . import oracles

a, b, c = (Letter(x) for x in "abc")
A, B = a.inv(), b.inv()


def all_pieces(g, max_len, essential):
    idx = PieceIndex(g)
    return {w for w in oracles.walks(g, max_len) if idx.is_piece(w, essential)}


def test_two_cycles_share_only_a():
    g = gamma_R([(a, b), (a, c)], ("a", "b", "c"))
    labels = {oracles.label(g, w) for w in all_pieces(g, 4, essential=True)}
    assert labels == {(a,), (A,)}


def test_periodic_cycle_pieces_not_essential():
    g = cycle_graph((a, b, a, b))
    idx = PieceIndex(g)
    occ = find_occurrences((a, b), g)
    assert len(occ) == 2
    assert idx.is_piece(occ[0].darts, essential=False)
    assert not idx.is_piece(occ[0].darts, essential=True)


def test_single_cycle_has_no_pieces():
    g = cycle_graph((a, b))
    assert all_pieces(g, 4, essential=False) == set()


def cycle_darts(w, offset=0):
    """Darts reading w around a cycle_graph whose first edge is edge offset."""
    return tuple(2 * (offset + i) + (0 if x.sign == 1 else 1) for i, x in enumerate(w))


def test_commutator_needs_four_pieces():
    g = cycle_graph((a, b, A, B))
    cyc = PathSpec.from_darts(0, cycle_darts((a, b, A, B)))
    dec = min_piece_decomposition(cyc, PieceIndex(g), essential=True)
    assert dec.count == 4


def test_not_decomposable():
    g = disjoint_union([cycle_graph((c,) * 5, ("a", "b", "c")),
                        cycle_graph((a, b), ("a", "b", "c"))], ("a", "b", "c"))
    idx = PieceIndex(g)
    cyc = PathSpec.from_darts(0, cycle_darts((c,) * 5))
    with pytest.raises(NotDecomposable):
        min_piece_decomposition(cyc, idx, essential=True)
    assert piece_distance(g, idx, 0, 2) == inf
    assert piece_distance(g, idx, 3, 3) == 0


def test_support_examples():
    g = cycle_graph((a, b))
    # vertex 1 is entered by a and left by b
    assert support(g, 1) == frozenset({A, b})
    from smallcancel.graph import LabelledGraph
    assert support(LabelledGraph(("a",), ["0"], []), 0) == frozenset()
    line = LabelledGraph(("a",), ["0", "1", "2"], [(0, 1, "a"), (1, 2, "a")])
    assert support(line, 1) == frozenset({A, a})


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_piece_verdicts_match_brute_force(seed):
    rng = random.Random(seed)
    g = oracles.random_reduced_graph(rng, rng.randint(2, 8), rng.randint(2, 14), ("a", "b"))
    table = oracles.piece_table(g, 5)
    idx = PieceIndex(g)
    for w, (piece, ess) in table.items():
        assert idx.is_piece(w, False) == piece
        assert idx.is_piece(w, True) == ess


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_pieces_closed_under_reversal(seed):
    rng = random.Random(seed)
    g = oracles.random_reduced_graph(rng, rng.randint(2, 7), rng.randint(2, 12), ("a", "b"))
    idx = PieceIndex(g)
    for w in oracles.walks(g, 4):
        rev = tuple(d ^ 1 for d in reversed(w))
        for ess in (False, True):
            assert idx.is_piece(w, ess) == idx.is_piece(rev, ess)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_min_decomposition_matches_dp(seed):
    rng = random.Random(seed)
    ws = [oracles.random_cyclic_word(rng, "ab", rng.randint(2, 9)) for _ in range(3)]
    g = disjoint_union([cycle_graph(w, ("a", "b")) for w in ws], ("a", "b"))
    idx = PieceIndex(g)
    darts = cycle_darts(ws[0])
    cyc = PathSpec.from_darts(0, darts)
    m = len(darts)

    def is_piece(s, k):
        seq = [darts[(s + i) % m] for i in range(k)]
        return idx.is_piece(seq, True)

    want = oracles.min_pieces_dp(is_piece, m, cyclic=True)
    if want == inf:
        with pytest.raises(NotDecomposable):
            min_piece_decomposition(cyc, idx, essential=True)
        return
    dec = min_piece_decomposition(cyc, idx, essential=True)
    assert dec.count == want
    for pc in dec.pieces:
        assert idx.is_piece(pc.darts, True)


def test_relator_pieces_agree_with_graph_index():
    rng = random.Random(7)
    for _ in range(30):
        ws = [oracles.random_cyclic_word(rng, "ab", rng.randint(2, 8)) for _ in range(3)]
        ws = [w for w in ws if oracles.proper_power(w) is None]
        if len({frozenset(oracles.conjugates_and_inverses(w)) for w in ws}) < len(ws):
            continue
        rp = RelatorPieces(ws)
        g = disjoint_union([cycle_graph(w, ("a", "b")) for w in ws], ("a", "b"))
        idx = PieceIndex(g)
        offset = 0
        for ci, w in enumerate(ws):
            darts = cycle_darts(w, offset)
            offset += len(w)
            got = [rp.piece_length(2 * ci, j, True) for j in range(len(w))]
            want = list(idx.piece_lengths(darts, True, closed=True))
            assert got == want


def test_distorted_family_far_vertices():
    # two pieces from x in either direction leave part of the cycle uncovered
    p = gen_distorted_family(7, 16)
    classes = relator_classes(p)
    rp = RelatorPieces(classes)
    for ci in (0, len(classes) // 2, len(classes) - 1):
        n = len(classes[ci])
        for x in (0, n // 3, n - 1):
            fwd = rp.reach(2 * ci, rp.position_of(ci, 1, x), 2)
            bwd = rp.reach(2 * ci + 1, rp.position_of(ci, -1, x), 2)
            assert fwd + bwd < n - 1
            assert rp.arc_count(ci, x, (x + fwd + 1) % n) >= 3


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_batched_lengths_match_single(seed):
    rng = random.Random(seed)
    g = oracles.random_reduced_graph(rng, rng.randint(2, 7), rng.randint(2, 12), ("a", "b"))
    idx = PieceIndex(g)
    ws = [w for w in oracles.walks(g, 4) if len(w) == 4]
    if not ws:
        return
    for ess in (False, True):
        many = idx.piece_lengths_many(ws, ess)
        for w, row in zip(ws, many):
            assert list(row) == list(idx.piece_lengths(w, ess))
