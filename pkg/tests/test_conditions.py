import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from smallcancel.conditions import (check_c_classical, check_c_via_graph, check_cprime_classical,
                                    check_gr, check_grprime, relator_classes, revalidate,
                                    revalidate_classical)
from smallcancel.distortion import distorted_relator, gen_distorted_family
from smallcancel.graph import LabelledGraph, cycle_graph, gamma_R
from smallcancel.pieces import RelatorPieces
from smallcancel.samples import commutator, differences_graph
from smallcancel.words import Letter, Presentation, power, symmetrized_closure

from . import oracles

a, b = Letter("a"), Letter("b")


def sym_graph(p):
    return gamma_R([x.representative for x in symmetrized_closure(p.relators)], p.alphabet)


def test_differences_gr6():
    g, _ = differences_graph()
    rep = check_gr(g, 6)
    assert rep.passed and "simple-cycle scope" in rep.notes


def test_commutator_graph_and_classical():
    p = commutator()
    g = sym_graph(p)
    assert check_gr(g, 4).passed
    rep = check_gr(g, 6)
    assert not rep.passed and rep.witness["decomposition"].count == 4
    assert revalidate(g, rep)
    rep = check_c_classical(p, 6)
    assert not rep.passed and rep.witness["decomposition"].count == 4
    assert revalidate_classical(p, rep)
    assert check_c_classical(p, 4).passed


def test_no_pieces_is_vacuous():
    g = cycle_graph((a, b))
    for n in (2, 6, 100):
        assert check_gr(g, n).passed
    assert check_grprime(g, Fraction(1, 100)).passed
    p = Presentation(("a", "b", "c", "d"), [power("a", 7) + (b,), power("c", 7) + (Letter("d"),)])
    assert check_c_classical(p, 50).passed


def test_distorted_small_truncations():
    p = gen_distorted_family(7, 5)
    assert check_c_classical(p, 7).passed
    classes = relator_classes(p)
    rp = RelatorPieces(classes)
    for ci, rel in enumerate(classes):
        for ri, w in ((2 * ci, tuple(rel)), (2 * ci + 1, oracles.inv_word(tuple(rel)))):
            n = len(w)
            for s in range(n):
                L = rp.piece_length(ri, s)
                assert sum(1 for k in range(L) if w[(s + k) % n].symbol == "a") <= 1


def test_lambda_must_be_exact():
    with pytest.raises(TypeError):
        check_grprime(cycle_graph((a, b)), 0.5)


def brute_max_piece(w):
    """Longest piece of the cyclic word w against itself and its inverse."""
    n = len(w)
    inv = oracles.inv_word(w)
    readings = [(0, i) for i in range(n)] + [(1, i) for i in range(n)]
    src = (w, inv)

    def at(r, k):
        return src[r[0]][(r[1] + k) % n]

    best = 0
    for r1 in readings[:n]:
        for r2 in readings:
            if r1 == r2:
                continue
            k = 0
            while k < n and at(r1, k) == at(r2, k):
                k += 1
            best = max(best, k)
    return best


def test_cprime_matches_brute_force_scan():
    w = (a, b) * 30 + (a, b, b)
    p = Presentation(("a", "b"), [w])
    longest = brute_max_piece(w)
    rep = check_cprime_classical(p, Fraction(1, 6))
    assert rep.passed == (longest < Fraction(len(w), 6))
    if not rep.passed:
        assert rep.witness["piece_length"] == longest
        assert revalidate_classical(p, rep)


def b_block_ratio(p, n):
    """Longest piece inside the b^(2^n) block of r_n, over |r_n|."""
    classes = relator_classes(p)
    rp = RelatorPieces(classes)
    rel = distorted_relator(7, n)
    ci = next(i for i, c in enumerate(classes) if len(c) == len(rel))
    w = tuple(classes[ci])
    start = next(s for s in range(len(w)) if w[s:s + 2 ** n] == (b,) * 2 ** n)
    L = min(rp.piece_length(2 * ci, start), 2 ** n)
    return Fraction(L, len(w)), L


def test_distorted_cprime_fails_at_8():
    p = gen_distorted_family(7, 8)
    rep = check_cprime_classical(p, Fraction(1, 6))
    assert not rep.passed and revalidate_classical(p, rep)
    ratio, L = b_block_ratio(p, 8)
    assert L == 2 ** 8 - 1 and ratio >= Fraction(1, 6)
    # one step earlier the pure b-block piece is still short
    assert b_block_ratio(gen_distorted_family(7, 7), 7)[0] < Fraction(1, 6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_classical_matches_graph_route(seed):
    rng = random.Random(seed)
    ws = [oracles.random_cyclic_word(rng, "ab", rng.randint(2, 7)) for _ in range(rng.randint(1, 3))]
    ws = [w for w in ws if oracles.proper_power(w) is None]
    if not ws:
        return
    p = Presentation(("a", "b"), ws)
    for n in (3, 4, 6):
        assert check_c_classical(p, n).passed == check_c_via_graph(p, n).passed


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 7))
def test_grprime_implies_gr(seed, n):
    rng = random.Random(seed)
    g = oracles.random_reduced_graph(rng, rng.randint(2, 7), rng.randint(2, 11), ("a", "b"))
    if check_grprime(g, Fraction(1, n - 1)).passed:
        assert check_gr(g, n).passed


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_fail_witnesses_revalidate(seed):
    rng = random.Random(seed)
    g = oracles.random_reduced_graph(rng, rng.randint(2, 7), rng.randint(2, 11), ("a", "b"))
    for rep in (check_gr(g, 6), check_grprime(g, Fraction(1, 4))):
        if not rep.passed:
            assert revalidate(g, rep)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_verdicts_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    g = oracles.random_reduced_graph(rng, rng.randint(2, 7), rng.randint(2, 11), ("a", "b", "c"))
    letters = ["x", "y", "z"]
    rng.shuffle(letters)
    ren = dict(zip(("a", "b", "c"), letters))
    perm = list(range(g.n_vertices))
    rng.shuffle(perm)
    h = LabelledGraph(tuple(letters), [str(i) for i in range(g.n_vertices)],
                      [(perm[s], perm[t], ren[x]) for s, t, x in g.edges])
    for n in (3, 5, 7):
        assert check_gr(g, n).passed == check_gr(h, n).passed
    lam = Fraction(1, 4)
    assert check_grprime(g, lam).passed == check_grprime(h, lam).passed
