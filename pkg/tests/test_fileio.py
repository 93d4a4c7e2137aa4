import json
import random
from fractions import Fraction

import pytest

from smallcancel.completion import cyclic_group, infinite_cyclic
from smallcancel.diagram import cube, random_disk
from smallcancel.distortion import gen_distorted_family
from smallcancel.fileio import (ParseError, dumps, format_diagram, format_factors, format_graph,
                                format_presentation, format_word, parse_diagram, parse_factors,
                                parse_graph, parse_presentation, parse_word)
from smallcancel.graph import find_isomorphism
from smallcancel.samples import commutator, differences_graph, free_product_example
from smallcancel.words import Letter

from . import oracles

a, b = Letter("a"), Letter("b")


def test_word_round_trip():
    rng = random.Random(0)
    for _ in range(50):
        w = oracles.random_word(rng, "ab", rng.randint(0, 12))
        text = format_word(w)
        assert tuple(parse_word(text, ("a", "b"))) == tuple(w)
    assert format_word(()) == "1"
    assert format_word((a, a, b.inv())) == "a^2 b^-1"


def test_uppercase_inverse():
    p = parse_presentation("generators a b\ninverse uppercase\na B A b\n")
    assert tuple(p.relators[0]) == (a, b.inv(), a.inv(), b)


def test_presentation_round_trip():
    for p in (commutator(), gen_distorted_family(7, 4)):
        q = parse_presentation(format_presentation(p))
        assert q.alphabet == p.alphabet and q.truncation == p.truncation
        assert [tuple(r) for r in q.relators] == [tuple(r) for r in p.relators]


def test_graph_round_trip():
    for g, _ in (differences_graph(), free_product_example()):
        h = parse_graph(format_graph(g))
        assert h.vertices == g.vertices and h.edges == g.edges
        assert find_isomorphism(g, h) is not None


def test_factor_round_trip():
    fs = [cyclic_group("G", 3, "s", all_elements=True), infinite_cyclic("Z", "t", radius=4)]
    back = parse_factors(format_factors(fs))
    assert [(f.name, f.kind, f.generators) for f in back] == [(f.name, f.kind, f.generators) for f in fs]
    assert back[0].table == fs[0].table and back[1].radius == 4


def test_diagram_round_trip():
    rng = random.Random(1)
    for d in [cube()] + [random_disk(rng.randint(0, 8), rng) for _ in range(10)]:
        text = format_diagram(d)
        e = parse_diagram(text)
        assert format_diagram(e) == text
        assert e.boundary_word() == d.boundary_word()


@pytest.mark.parametrize("text, line, col", [
    ("generators a b\na c\n", 2, 3),
    ("generators a b\na^0\n", 2, 1),
    ("a b\n", 1, 1),
    ("generators a b\ntruncation x\n", 2, 12),
    ("# comment\ngenerators a\n\na a^x\n", 4, 3),
])
def test_presentation_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as ex:
        parse_presentation(text, source="p.txt")
    assert (ex.value.line, ex.value.col) == (line, col)
    assert str(ex.value).startswith(f"p.txt:{line}:{col}:")


def test_graph_and_factor_errors():
    with pytest.raises(ParseError) as ex:
        parse_graph("alphabet a\n0 1 b\n")
    assert ex.value.line == 2 and ex.value.col == 5
    with pytest.raises(ParseError):
        parse_graph("0 1 a\n")
    with pytest.raises(ParseError):
        parse_factors("generators s\n")
    with pytest.raises(ParseError):
        parse_factors("factor G finite\ngenerators s\nelements e s\nidentity e\nrow e: e\n")
    with pytest.raises(ParseError):
        parse_diagram("topology disk\ndart 0 0 1 a\nrot 0: 0\n")


def test_structured_output():
    data = json.loads(dumps({"ratio": Fraction(1, 6), "word": (a, b.inv()), "n": 3}))
    assert data == {"ratio": "1/6", "word": "a b^-1", "n": 3}
