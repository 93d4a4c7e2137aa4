import random

import pytest
from hypothesis import given, settings, strategies as st

from smallcancel.words import (CyclicWord, EmptyAfterReduction, Letter, Presentation, RunWord,
                               class_representative, concise_refinement, cyclic_reduce,
                               free_reduce, inverse, is_cyclically_reduced, is_freely_reduced,
                               is_proper_power, symmetrized_closure, tietze_reduce, word)
from smallcancel.distortion import distorted_relator

from . import oracles

a, b, c, d = (Letter(x) for x in "abcd")
A, B = a.inv(), b.inv()

letters = st.builds(Letter, st.sampled_from("abc"), st.sampled_from((1, -1)))
words = st.lists(letters, max_size=12).map(tuple)


def test_free_reduce_examples():
    assert free_reduce((a, b, B, a)) == (a, a)
    assert free_reduce(()) == ()
    s, t = Letter("s"), Letter("t")
    assert free_reduce((s, t, t.inv(), s.inv())) == ()


@given(words)
def test_free_reduce_matches_oracle(w):
    r = free_reduce(w)
    assert tuple(r) == oracles.free_reduce(w)
    assert tuple(free_reduce(r)) == tuple(r)
    assert len(r) <= len(w)
    assert is_freely_reduced(r)


@given(words)
def test_free_reduce_on_runs(w):
    assert tuple(free_reduce(RunWord.of(w))) == oracles.free_reduce(w)


def test_cyclic_reduce_examples():
    core, conj = cyclic_reduce((a, b, A))
    assert tuple(core.representative) == (b,) and tuple(conj) == (a,)
    core, conj = cyclic_reduce((a, b))
    assert tuple(core.representative) == (a, b) and tuple(conj) == ()
    core, conj = cyclic_reduce((a, a, b, A, A))
    assert tuple(core.representative) == (b,) and tuple(conj) == (a, a)
    with pytest.raises(EmptyAfterReduction):
        cyclic_reduce((a, A))


@given(words)
def test_cyclic_reduce_conjugates_back(w):
    if not oracles.free_reduce(w):
        return
    core, conj = cyclic_reduce(w)
    rep = tuple(core.representative)
    assert is_cyclically_reduced(rep)
    back = oracles.free_reduce(tuple(conj) + rep + oracles.inv_word(tuple(conj)))
    assert back == oracles.free_reduce(w)


def test_symmetrized_closure_examples():
    assert {tuple(x.representative) for x in symmetrized_closure([(a, b)])} == \
        {(a, b), (b, a), (B, A), (A, B)}
    assert len(symmetrized_closure([(a,)])) == 2
    r1 = tuple(distorted_relator(7, 1))
    assert len(symmetrized_closure([r1])) == 2 * len(r1)
    assert len(oracles.conjugates_and_inverses(r1)) == 2 * len(r1)


@settings(max_examples=60)
@given(st.integers(0, 10_000), st.integers(1, 10))
def test_symmetrized_closure_against_oracle(seed, n):
    rng = random.Random(seed)
    w = oracles.random_cyclic_word(rng, "ab", n)
    clo = {tuple(x.representative) for x in symmetrized_closure([w])}
    assert clo == oracles.conjugates_and_inverses(w)
    again = {tuple(x.representative) for x in symmetrized_closure(list(clo))}
    assert again == clo
    conj_inv = any(oracles.inv_word(w) == w[i:] + w[:i] for i in range(len(w)))
    full = oracles.proper_power(w) is None and not conj_inv
    assert (len(clo) == 2 * n) == full


def test_proper_power_examples():
    root, k = is_proper_power((a, b, a, b))
    assert tuple(root) == (a, b) and k == 2
    assert is_proper_power((a, b)) is None
    root, k = is_proper_power((a, a, a))
    assert tuple(root) == (a,) and k == 3


@given(st.lists(letters, min_size=1, max_size=12).map(tuple))
def test_proper_power_matches_period_scan(w):
    got = is_proper_power(w)
    want = oracles.proper_power(w)
    assert (got is None) == (want is None)
    if got:
        assert (tuple(got[0]), got[1]) == want
    got_runs = is_proper_power(RunWord.of(w))
    assert (got_runs is None) == (want is None)
    if got_runs:
        assert (tuple(got_runs[0]), got_runs[1]) == want


def test_concise_refinement_examples():
    sym = [tuple(x.representative) for x in symmetrized_closure([(a, b)])]
    p = concise_refinement(Presentation(("a", "b"), sym))
    assert [tuple(r) for r in p.relators] == [(a, b)]
    assert concise_refinement(Presentation(("a", "b"), [])).relators == ()
    sym = [tuple(x.representative) for x in symmetrized_closure([(a, b), (b, a)])]
    assert len(concise_refinement(Presentation(("a", "b"), sym)).relators) == 1


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_concise_refinement_one_per_class(seed):
    rng = random.Random(seed)
    base = [oracles.random_cyclic_word(rng, "ab", rng.randint(1, 10)) for _ in range(4)]
    sym = sorted({x for w in base for x in oracles.conjugates_and_inverses(w)})
    p = concise_refinement(Presentation(("a", "b"), sym))
    # brute-force partition into classes
    classes = []
    for w in sym:
        if not any(w in cl for cl in classes):
            classes.append(oracles.conjugates_and_inverses(w))
    reps = [tuple(r) for r in p.relators]
    assert len(reps) == len(classes)
    for cl in classes:
        inside = [r for r in reps if r in cl]
        assert len(inside) == 1
        assert inside[0] == min(cl, key=lambda w: (len(w), [("ab".index(x.symbol), x.sign < 0)
                                                           for x in w]))
    again = {x for r in reps for x in oracles.conjugates_and_inverses(r)}
    assert again == set(sym)


def test_class_representative_on_runs():
    r = distorted_relator(7, 3)
    rep = class_representative(r, ("a", "b"))
    assert isinstance(rep, RunWord)
    assert tuple(rep) in oracles.conjugates_and_inverses(tuple(r))


def test_tietze_worked_examples():
    p = tietze_reduce(Presentation(("a", "b"), [(a, b)]))
    assert p.alphabet == ("a",) and p.relators == ()
    q = Presentation(("a",), [(a, a)])
    assert tietze_reduce(q) == q
    comm = Presentation(("a", "b"), [(a, b, A, B)])
    assert tietze_reduce(comm) == comm


def test_tietze_is_one_pass():
    # c d goes with d only; c is left behind as a free generator
    p = Presentation(("a", "b", "c", "d"), [(a, b, a, b), (c, d)])
    once = tietze_reduce(p)
    assert once.relators == ((a, b, a, b),)
    assert once.alphabet == ("a", "b", "c")


def test_word_helpers():
    assert word("a", ("b", -1)) == (a, B)
    assert tuple(inverse((a, b))) == (B, A)
    with pytest.raises(ValueError):
        CyclicWord((a, A))
    with pytest.raises(ValueError):
        Presentation(("a",), [(b,)])
