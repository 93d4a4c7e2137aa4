"""Small named inputs used by the tests, the demos and the CLI."""

from __future__ import annotations

from .completion import FactorSpec, cyclic_group, infinite_cyclic
from .graph import LabelledGraph, cycle_graph, disjoint_union
from .words import Letter, Presentation, word


def commutator() -> Presentation:
    a, b = Letter("a"), Letter("b")
    return Presentation(("a", "b"), [word(a, b, a.inv(), b.inv())])


def choices_graphs():
    """Two graphs over Z/3 * Z/2 that differ by a choice of labels and
    complete to the same thing. Z/3 is generated by {s, s2}."""
    g1 = cyclic_group("G1", 3, "s")
    f1 = FactorSpec("G1", "finite", ("s", "s2"), g1.elements, g1.identity, g1.table)
    f2 = cyclic_group("G2", 2, "t")
    names = ["A", "B", "BC", "C"]
    left = LabelledGraph(("s", "s2", "t"), names, [(1, 0, "t"), (2, 1, "s"), (1, 3, "s")])
    right = LabelledGraph(("s", "s2", "t"), names, [(1, 0, "t"), (2, 3, "s2"), (1, 3, "s")])
    return left, right, [f1, f2]


def free_product_example():
    """A five-vertex graph over Z/3 * Z/2 with every group element a label."""
    f1 = cyclic_group("G1", 3, "s", all_elements=True, identity_name="e1")
    f2 = cyclic_group("G2", 2, "t", all_elements=True, identity_name="e2")
    g = LabelledGraph(("s", "s2", "t"), ["A", "B", "C", "D", "BC"],
                      [(1, 0, "t"), (4, 1, "s"), (2, 4, "s"), (0, 3, "s2"), (3, 2, "t")])
    return g, [f1, f2]


def differences_graph(radius: int = 3):
    """A hexagon a a b a^-1 b^-1 b^-1 over Z * Z."""
    g = LabelledGraph(("a", "b"), list("ABCDEF"),
                      [(0, 1, "a"), (1, 2, "a"), (2, 3, "b"), (4, 3, "a"), (5, 4, "b"), (0, 5, "b")])
    return g, [infinite_cyclic("A", "a", radius), infinite_cyclic("B", "b", radius)]


def block_cycles(count: int = 16, blocks: int = 9, radius: int = 2):
    """count cycles over Z * Z; cycle c reads a b^(c+1) a^2 b^(c+1) ... a^blocks b^(c+1).
    Each adjacent pair of blocks occurs once in the whole graph, so a piece
    meets at most three consecutive blocks."""
    a, b = Letter("a"), Letter("b")
    graphs = []
    for c in range(count):
        w = []
        for k in range(1, blocks + 1):
            w += [a] * k + [b] * (c + 1)
        graphs.append(cycle_graph(tuple(w), ("a", "b")))
    g = disjoint_union(graphs, ("a", "b"))
    return g, [infinite_cyclic("A", "a", radius), infinite_cyclic("B", "b", radius)]


def cycle_a7b() -> LabelledGraph:
    a, b = Letter("a"), Letter("b")
    return cycle_graph((a,) * 7 + (b,), ("a", "b"))


def wide_overlap_cycle():
    """A Gr'(1/6) cycle with a Case2b word: returns (graph, w)."""
    def parse(s):
        return tuple(Letter(c.lower(), -1 if c.isupper() else 1) for c in s)
    g = cycle_graph(parse("AcabaBBBCBAcaaBaBBcaCBCA"), ("a", "b", "c"))
    return g, parse("AcabaBBBCB")
