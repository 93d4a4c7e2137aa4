"""Text formats for presentations, graphs, factors and diagrams, and a
structured (JSON) rendering of reports and certificates.

Words are whitespace-separated tokens `sym` or `sym^k` with k a nonzero
integer. Lines starting with `#` are comments. Rationals are `p/q` strings.
"""

from __future__ import annotations

import dataclasses
import json
import re
from fractions import Fraction
from typing import Optional

from .completion import FactorSpec, InconsistentFactors
from .diagram import Diagram, InvalidMap
from .graph import LabelledGraph, PathSpec
from .words import Letter, Presentation, RunWord, runs_of


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.line, self.col, self.source = line, col, source


_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            yield no, raw, body


def _col(raw: str, tok: str) -> int:
    return raw.find(tok) + 1


def parse_word(body: str, alphabet=None, line: int = 1, raw: Optional[str] = None,
               uppercase_inverse: bool = False, source: str = "<input>") -> RunWord:
    raw = raw if raw is not None else body
    runs = []
    for tok in body.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ParseError(f"bad token {tok!r}", line, _col(raw, tok), source)
        sym, exp = m.group(1), int(m.group(2)) if m.group(2) else 1
        if exp == 0:
            raise ParseError("zero exponent", line, _col(raw, tok), source)
        if uppercase_inverse and alphabet is not None and sym not in alphabet \
                and sym.lower() in alphabet:
            sym, exp = sym.lower(), -exp
        if alphabet is not None and sym not in alphabet:
            raise ParseError(f"symbol {sym!r} not in alphabet", line, _col(raw, tok), source)
        runs.append((Letter(sym, 1 if exp > 0 else -1), abs(exp)))
    return RunWord(runs)


def format_word(w) -> str:
    out = []
    for x, k in runs_of(w):
        e = k * x.sign
        out.append(x.symbol if e == 1 else f"{x.symbol}^{e}")
    return " ".join(out) if out else "1"


# ------------------------------------------------------------ presentations

def parse_presentation(text: str, source: str = "<input>") -> Presentation:
    alphabet, trunc, upper, rels = None, None, False, []
    for no, raw, body in _lines(text):
        head, _, rest = body.strip().partition(" ")
        if head == "generators":
            alphabet = tuple(rest.split())
            for s in alphabet:
                if not re.match(r"[A-Za-z_][A-Za-z0-9_]*$", s):
                    raise ParseError(f"bad generator name {s!r}", no, _col(raw, s), source)
            if len(set(alphabet)) != len(alphabet):
                raise ParseError("duplicate generator", no, 1, source)
        elif head == "truncation":
            try:
                trunc = int(rest)
            except ValueError:
                raise ParseError("truncation must be an integer", no, _col(raw, rest.strip()), source)
        elif head == "inverse":
            if rest.strip() != "uppercase":
                raise ParseError("only 'inverse uppercase' is understood", no, 1, source)
            upper = True
        else:
            if alphabet is None:
                raise ParseError("relator before the generators line", no, 1, source)
            rels.append(parse_word(body, alphabet, no, raw, upper, source))
    if alphabet is None:
        raise ParseError("missing generators line", 1, 1, source)
    return Presentation(alphabet, rels, truncation=trunc)


def format_presentation(p: Presentation) -> str:
    out = ["generators " + " ".join(p.alphabet)]
    if p.truncation is not None:
        out.append(f"truncation {p.truncation}")
    out += [format_word(r) for r in p.relators]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ graphs

def parse_graph(text: str, source: str = "<input>") -> LabelledGraph:
    alphabet, names, ids, edges = None, [], {}, []

    def vid(name):
        if name not in ids:
            ids[name] = len(names)
            names.append(name)
        return ids[name]

    for no, raw, body in _lines(text):
        parts = body.split()
        if parts[0] == "alphabet":
            alphabet = tuple(parts[1:])
        elif parts[0] == "vertices":
            for v in parts[1:]:
                vid(v)
        else:
            if alphabet is None:
                raise ParseError("edge before the alphabet line", no, 1, source)
            if len(parts) != 3:
                raise ParseError("expected 'source target label'", no, 1, source)
            s, t, a = parts
            if a not in alphabet:
                raise ParseError(f"label {a!r} not in alphabet", no, _col(raw, a), source)
            edges.append((vid(s), vid(t), a))
    if alphabet is None:
        raise ParseError("missing alphabet line", 1, 1, source)
    return LabelledGraph(alphabet, tuple(names), tuple(edges))


def format_graph(g: LabelledGraph) -> str:
    out = ["alphabet " + " ".join(g.alphabet), "vertices " + " ".join(g.vertices)]
    out += [f"{g.vertices[s]} {g.vertices[t]} {a}" for s, t, a in g.edges]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ factors

def parse_factors(text: str, source: str = "<input>") -> list:
    """Blocks start with `factor NAME finite|Z`; then `generators`, and either
    `elements`, `identity` and one `row g: p1 p2 ...` per element, or `radius`."""
    blocks = []
    for no, raw, body in _lines(text):
        parts = body.split()
        if parts[0] == "factor":
            if len(parts) != 3:
                raise ParseError("expected 'factor NAME KIND'", no, 1, source)
            blocks.append({"name": parts[1], "kind": parts[2], "rows": {}, "line": no})
            continue
        if not blocks:
            raise ParseError("entry before any factor line", no, 1, source)
        b = blocks[-1]
        if parts[0] in ("generators", "elements"):
            b[parts[0]] = tuple(parts[1:])
        elif parts[0] in ("identity", "radius"):
            if len(parts) != 2:
                raise ParseError(f"expected '{parts[0]} VALUE'", no, 1, source)
            b[parts[0]] = parts[1]
        elif parts[0] == "row":
            left, _, right = body.partition(":")
            key = left.split()[1:]
            if len(key) != 1 or not right.strip():
                raise ParseError("expected 'row g: products'", no, 1, source)
            b["rows"][key[0]] = tuple(right.split())
        else:
            raise ParseError(f"unknown entry {parts[0]!r}", no, 1, source)
    out = []
    for b in blocks:
        try:
            if b["kind"] == "Z":
                out.append(FactorSpec(b["name"], "Z", b.get("generators", ()),
                                      radius=int(b.get("radius", 3))))
                continue
            els = b.get("elements", ())
            table = {}
            for g, row in b["rows"].items():
                if len(row) != len(els):
                    raise ParseError(f"row {g} has {len(row)} entries, expected {len(els)}",
                                     b["line"], 1, source)
                for h, gh in zip(els, row):
                    table[(g, h)] = gh
            out.append(FactorSpec(b["name"], "finite", b.get("generators", ()), els,
                                  b.get("identity"), table))
        except (InconsistentFactors, ValueError) as ex:
            if isinstance(ex, ParseError):
                raise
            raise ParseError(str(ex), b["line"], 1, source)
    return out


def format_factors(factors) -> str:
    out = []
    for f in factors:
        out.append(f"factor {f.name} {f.kind}")
        out.append("generators " + " ".join(f.generators))
        if f.kind == "Z":
            out.append(f"radius {f.radius}")
            continue
        out.append("elements " + " ".join(f.elements))
        out.append(f"identity {f.identity}")
        for g in f.elements:
            out.append(f"row {g}: " + " ".join(f.table[(g, h)] for h in f.elements))
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ diagrams

def parse_diagram(text: str, source: str = "<input>") -> Diagram:
    """`topology disk|sphere`, `outer DART`, `dart ID TAIL OPP LABEL` (LABEL is
    `1` for the identity) and `rot VERTEX: DART ...` lines."""
    d, outer, darts, rots = None, None, {}, {}
    for no, raw, body in _lines(text):
        parts = body.split()
        try:
            if parts[0] == "topology":
                d = Diagram(parts[1])
            elif parts[0] == "outer":
                outer = int(parts[1])
            elif parts[0] == "dart":
                t, u, o = int(parts[1]), int(parts[2]), int(parts[3])
                lab = None if parts[4] == "1" else parse_word(parts[4], None, no, raw, False, source)
                if lab is not None and len(lab) != 1:
                    raise ParseError("dart label must be one letter", no, _col(raw, parts[4]), source)
                darts[t] = (u, o, lab[0] if lab is not None else None, no)
            elif parts[0] == "rot":
                left, _, right = body.partition(":")
                rots[int(left.split()[1])] = [int(x) for x in right.split()]
            else:
                raise ParseError(f"unknown entry {parts[0]!r}", no, 1, source)
        except (IndexError, ValueError) as ex:
            if isinstance(ex, ParseError):
                raise
            raise ParseError(f"malformed line: {ex}", no, 1, source)
    if d is None:
        raise ParseError("missing topology line", 1, 1, source)
    for t, (u, o, lab, no) in darts.items():
        if o not in darts:
            raise ParseError(f"opposite dart {o} undefined", no, 1, source)
        d.tail[t], d.opp[t], d.label[t] = u, o, lab
    d.rot = rots
    d.outer = outer
    d._next_dart = max(darts, default=-1) + 1
    d._next_vertex = max(rots, default=-1) + 1
    try:
        d.validate()
    except InvalidMap as ex:
        raise ParseError(str(ex), 1, 1, source)
    return d


def format_diagram(d: Diagram) -> str:
    out = [f"topology {d.topology}"]
    if d.outer is not None:
        out.append(f"outer {d.outer}")
    for t in sorted(d.tail):
        lab = d.label[t]
        out.append(f"dart {t} {d.tail[t]} {d.opp[t]} {format_word((lab,)) if lab else '1'}")
    for v in sorted(d.rot):
        out.append(f"rot {v}: " + " ".join(map(str, d.rot[v])))
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ structured output

def jsonable(obj, g: Optional[LabelledGraph] = None):
    """Plain data for reports: Fractions become `p/q` strings, paths list edge
    ids with their direction, words are rendered in the text format."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, PathSpec):
        out = {"start": obj.start, "steps": [[e, s] for e, s in obj.steps]}
        if g is not None:
            out["start_name"] = g.vertices[obj.start]
        return out
    if isinstance(obj, Letter):
        return format_word((obj,))
    if isinstance(obj, RunWord):
        return format_word(obj)
    if isinstance(obj, tuple) and obj and all(isinstance(x, Letter) for x in obj):
        return format_word(obj)
    if isinstance(obj, Presentation):
        return format_presentation(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name), g) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v, g) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(x, g) for x in items]
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return repr(obj)


def dumps(obj, g: Optional[LabelledGraph] = None) -> str:
    return json.dumps(jsonable(obj, g), indent=2, sort_keys=True) + "\n"


def format_text(obj, g: Optional[LabelledGraph] = None) -> str:
    data = jsonable(obj, g)
    if not isinstance(data, dict):
        return json.dumps(data) + "\n"
    lines = []
    for k in sorted(data):
        v = data[k]
        lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v)}")
    return "\n".join(lines) + "\n"
