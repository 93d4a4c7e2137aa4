"""Completions over free products of finite groups and (truncated) infinite cyclic groups.

Every edge of the input graph gets its own copy of the factor's Cayley
graph glued along an edge with the same label. The copies are then folded
until no vertex has two equally labelled edges on the same side; since the
sheets are complete Cayley graphs, this is the identification of edges
joined by a path whose label is trivial in the free product.

Infinite cyclic factors are cut off at a radius: a copy keeps the elements
-radius .. radius+1 around its edge. Verdicts derived from a truncated
completion carry that radius.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .conditions import SCOPE, ConditionReport, as_fraction
from .graph import (LabelledGraph, PathSpec, find_isomorphism, path_label, path_vertices,
                    rotate_closed, simple_cycles)
from .pieces import NotDecomposable, PieceIndex, min_piece_decomposition
from .words import Letter


class InconsistentFactors(ValueError):
    pass


class Budget(RuntimeError):
    pass


@dataclass(frozen=True)
class FactorSpec:
    """A factor group with generating set.

    kind "finite": `elements` are names, `table[(g, h)]` is the product,
    `generators` are the labels (element names, identity allowed).
    kind "Z": one generator symbol, elements are integers, `radius`
    bounds the attached copies.
    """
    name: str
    kind: str
    generators: tuple
    elements: tuple = ()
    identity: Optional[str] = None
    table: dict = field(default_factory=dict, hash=False, compare=False)
    radius: int = 3

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.kind == "Z":
            if len(self.generators) != 1:
                raise InconsistentFactors("infinite cyclic factor takes one generator")
            if self.radius < 1:
                raise InconsistentFactors("radius must be at least 1")
            return
        if self.kind != "finite":
            raise InconsistentFactors(f"unknown factor kind {self.kind!r}")
        self._check_group()

    def _check_group(self):
        E, t = self.elements, self.table
        if self.identity not in E:
            raise InconsistentFactors("identity is not an element")
        for g in E:
            for h in E:
                if t.get((g, h)) not in E:
                    raise InconsistentFactors(f"product {g}*{h} missing from table")
        for g in E:
            if t[(self.identity, g)] != g or t[(g, self.identity)] != g:
                raise InconsistentFactors("identity does not act trivially")
            if not any(t[(g, h)] == self.identity for h in E):
                raise InconsistentFactors(f"{g} has no inverse")
        for g in E:
            for h in E:
                for k in E:
                    if t[(t[(g, h)], k)] != t[(g, t[(h, k)])]:
                        raise InconsistentFactors("table is not associative")
        for s in self.generators:
            if s not in E:
                raise InconsistentFactors(f"generator {s} is not an element")
        reached = {self.identity}
        frontier = [self.identity]
        while frontier:
            g = frontier.pop()
            for s in self.generators:
                for h in (t[(g, s)], t[(g, self.inverse(s))]):
                    if h not in reached:
                        reached.add(h)
                        frontier.append(h)
        if reached != set(E):
            raise InconsistentFactors(f"generators of {self.name} do not generate")

    def inverse(self, g):
        if self.kind == "Z":
            return -g
        return next(h for h in self.elements if self.table[(g, h)] == self.identity)

    def mul(self, g, h):
        if self.kind == "Z":
            return g + h
        return self.table[(g, h)]

    @property
    def one(self):
        return 0 if self.kind == "Z" else self.identity

    def letter_value(self, x: Letter):
        g = 1 if self.kind == "Z" else x.symbol
        return g if x.sign == 1 else self.inverse(g)

    def generator_value(self, s):
        return 1 if self.kind == "Z" else s

    def sheet_elements(self, s):
        """Elements of one attached copy glued along the edge 1 -> s."""
        if self.kind == "Z":
            return list(range(-self.radius, self.radius + 2))
        return list(self.elements)

    def cayley_edges(self, elements):
        members = set(elements)
        for g in elements:
            for s in self.generators:
                h = self.mul(g, self.generator_value(s))
                if h in members:
                    yield g, h, s


def cyclic_group(name: str, order: int, gen: str = "s", all_elements: bool = False,
                 identity_name: str = None) -> FactorSpec:
    """Z/order with elements named 1, gen, gen2, ... ; generators {gen} or all elements."""
    ident = identity_name or f"1_{name}"
    names = [ident] + [gen if k == 1 else f"{gen}{k}" for k in range(1, order)]
    table = {(names[i], names[j]): names[(i + j) % order] for i in range(order) for j in range(order)}
    gens = tuple(names) if all_elements else (gen,)
    return FactorSpec(name, "finite", gens, tuple(names), ident, table)


def infinite_cyclic(name: str, gen: str, radius: int = 3) -> FactorSpec:
    return FactorSpec(name, "Z", (gen,), radius=radius)


def factor_of_labels(factors: Sequence[FactorSpec]) -> dict:
    owner = {}
    for i, f in enumerate(factors):
        for s in f.generators:
            if s in owner:
                raise InconsistentFactors(f"label {s} lies in two factors")
            owner[s] = i
    return owner


def free_product_normal_form(w: Sequence[Letter], factors: Sequence[FactorSpec]) -> list:
    """Syllables (factor index, element) of w in the free product."""
    owner = factor_of_labels(factors)
    out = []
    for x in w:
        i = owner[x.symbol]
        f = factors[i]
        v = f.letter_value(x)
        if out and out[-1][0] == i:
            v = f.mul(out[-1][1], v)
            out.pop()
        if v != f.one:
            out.append((i, v))
    return out


def is_trivial_in_free_product(w: Sequence[Letter], factors: Sequence[FactorSpec]) -> bool:
    return not free_product_normal_form(w, factors)


@dataclass
class Completion:
    graph: LabelledGraph
    factors: tuple
    edge_sheet: tuple  # sheet id per edge
    sheet_factor: tuple  # factor index per sheet
    vertex_origin: tuple  # input vertex -> completion vertex
    edge_origin: tuple  # input edge -> completion edge
    copies: tuple  # per attached copy: (factor index, {element: completion vertex}, sheet id)
    truncated: bool
    radius: Optional[int]
    source: Optional[LabelledGraph] = None

    def sheet_vertices(self, sheet: int) -> set:
        out = set()
        for e, sh in enumerate(self.edge_sheet):
            if sh == sheet:
                s, t, _ = self.graph.edges[e]
                out.update((s, t))
        return out

    def sheets_at(self, v: int) -> set:
        return {self.edge_sheet[d >> 1] for d in self.graph.out_darts[v]}

    def interior_vertices(self) -> list:
        """Vertices lying in exactly one attached sheet."""
        return [v for v in range(self.graph.n_vertices) if len(self.sheets_at(v)) == 1]


class _UF:
    def __init__(self, n=0):
        self.p = list(range(n))

    def add(self):
        self.p.append(len(self.p))
        return len(self.p) - 1

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if a > b:
            a, b = b, a
        self.p[b] = a
        return True


def build_completion(g: LabelledGraph, factors: Sequence[FactorSpec],
                     budget: int = 200_000) -> Completion:
    factors = tuple(factors)
    owner = factor_of_labels(factors)
    for _, _, a in g.edges:
        if a not in owner:
            raise InconsistentFactors(f"label {a} lies in no factor")
    vuf = _UF(g.n_vertices)
    edges = []  # (src, tgt, label, copy)
    copies = []
    origin_edge = []
    for e, (s, t, a) in enumerate(g.edges):
        i = owner[a]
        f = factors[i]
        els = f.sheet_elements(a)
        vmap = {}
        one, sv = f.one, f.generator_value(a)
        for el in els:
            if el == one:
                vmap[el] = s
            elif el == f.mul(one, sv) and el not in vmap:
                vmap[el] = t
            else:
                vmap[el] = vuf.add()
        if sv == one:
            vuf.union(s, t)
        if len(vuf.p) > budget:
            raise Budget("completion exceeds vertex budget")
        k = len(copies)
        copies.append((i, vmap))
        glued = None
        for x, y, lab in f.cayley_edges(els):
            if x == one and lab == a and glued is None:
                glued = len(edges)
            edges.append((vmap[x], vmap[y], lab, k))
        origin_edge.append(glued)
    cuf = _UF(len(copies))
    # fold until stable
    changed = True
    while changed:
        changed = False
        out_seen, in_seen = {}, {}
        for s, t, a, k in edges:
            fs, ft = vuf.find(s), vuf.find(t)
            key = (fs, a)
            if key in out_seen:
                t2, k2 = out_seen[key]
                if vuf.union(t2, ft):
                    changed = True
                cuf.union(k, k2)
            else:
                out_seen[key] = (ft, k)
            key = (ft, a)
            if key in in_seen:
                s2, k2 = in_seen[key]
                if vuf.union(s2, fs):
                    changed = True
                cuf.union(k, k2)
            else:
                in_seen[key] = (fs, k)
    # dense ids in order of first appearance of the representative
    reps = sorted({vuf.find(v) for v in range(len(vuf.p))})
    vid = {r: i for i, r in enumerate(reps)}
    names = []
    for r in reps:
        names.append(g.vertices[r] if r < g.n_vertices else f"_{r}")
    final_edges, edge_index, edge_sheet = [], {}, []
    sheet_ids = {}
    edge_final_of = []
    for s, t, a, k in edges:
        key = (vid[vuf.find(s)], vid[vuf.find(t)], a)
        if key not in edge_index:
            edge_index[key] = len(final_edges)
            final_edges.append(key)
            root = cuf.find(k)
            sheet_ids.setdefault(root, len(sheet_ids))
            edge_sheet.append(sheet_ids[root])
        edge_final_of.append(edge_index[key])
    sheet_factor = [None] * len(sheet_ids)
    for root, sid in sheet_ids.items():
        sheet_factor[sid] = copies[root][0]
    graph = LabelledGraph(sorted(owner, key=lambda s: (owner[s], factors[owner[s]].generators.index(s))),
                          names, final_edges)
    copies_out = tuple((i, {el: vid[vuf.find(v)] for el, v in vmap.items()},
                        sheet_ids[cuf.find(k)]) for k, (i, vmap) in enumerate(copies))
    truncated = any(f.kind == "Z" for f in factors)
    radius = min((f.radius for f in factors if f.kind == "Z"), default=None)
    return Completion(graph, factors, tuple(edge_sheet), tuple(sheet_factor),
                      tuple(vid[vuf.find(v)] for v in range(g.n_vertices)),
                      tuple(edge_final_of[k] for k in origin_edge),
                      copies_out, truncated, radius, g)


@dataclass(frozen=True)
class SheetVerdict:
    ok: bool
    witness: Optional[tuple] = None  # (copy index, element, element) collapsed

    def __bool__(self):
        return self.ok


def is_embedded_sheets(c: Completion) -> SheetVerdict:
    for k, (i, vmap, _) in enumerate(c.copies):
        seen = {}
        for el, v in vmap.items():
            if v in seen:
                return SheetVerdict(False, (k, seen[v], el))
            seen[v] = el
    return SheetVerdict(True)


def _sheet_distance(c: Completion, sheet: int, u: int, v: int) -> int:
    g = c.graph
    if u == v:
        return 0
    dist = {u: 0}
    q = deque([u])
    while q:
        x = q.popleft()
        for d in g.out_darts[x]:
            if c.edge_sheet[d >> 1] != sheet:
                continue
            y = g.head(d)
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == v:
                    return dist[y]
                q.append(y)
    return None


def _segments(c: Completion, darts, closed):
    """Maximal runs of consecutive darts within one sheet: (start index, length, sheet)."""
    m = len(darts)
    sh = [c.edge_sheet[d >> 1] for d in darts]
    if m == 0:
        return []
    if closed and len(set(sh)) == 1:
        return [(0, m, sh[0])]
    start = 0
    if closed:
        while sh[start] == sh[start - 1]:
            start += 1
    segs = []
    i = 0
    while i < m:
        j = i
        while j + 1 < m and sh[(start + j + 1) % m] == sh[(start + i) % m]:
            j += 1
        segs.append(((start + i) % m, j - i + 1, sh[(start + i) % m]))
        i = j + 1
    return segs


def locally_geodesic(c: Completion, p: PathSpec) -> bool:
    g = c.graph
    vs = path_vertices(g, p)
    darts = p.darts
    for i0, k, sheet in _segments(c, darts, closed=False):
        d = _sheet_distance(c, sheet, vs[i0], vs[i0 + k])
        if d is None or d != k:
            return False
    return True


def geodesic_lengths(c: Completion, darts, closed: bool):
    """Longest locally geodesic subpath starting at each position."""
    g = c.graph
    m = len(darts)
    seq = list(darts) * (2 if closed else 1)
    verts = [g.tail(seq[0])] + [g.head(d) for d in seq]
    out = []
    for i in range(m):
        k = 0
        limit = m if closed else m - i
        while k < limit:
            # extend by one dart and test the sheet run containing it
            j = i + k
            sheet = c.edge_sheet[seq[j] >> 1]
            a = j
            while a > i and c.edge_sheet[seq[a - 1] >> 1] == sheet:
                a -= 1
            d = _sheet_distance(c, sheet, verts[a], verts[j + 1])
            if d != j + 1 - a:
                break
            k += 1
        out.append(k)
    return out


def closed_path_label_nontrivial(c: Completion, p: PathSpec) -> bool:
    return not is_trivial_in_free_product(path_label(c.graph, p), c.factors)


def _star_report(name, c, params):
    rep = ConditionReport(name, params, True, notes=[SCOPE])
    if c.truncated:
        rep.notes.append(f"infinite cyclic factors truncated at radius {c.radius}")
        rep.truncation = c.radius
    return rep


def check_gr_star(c: Completion, n: int, essential: bool = True,
                  idx: Optional[PieceIndex] = None) -> ConditionReport:
    """Gr_*(n): embedded sheets, and no closed path with label nontrivial in the
    free product is a concatenation of fewer than n (essential) pieces."""
    rep = _star_report("Gr*" if essential else "C*", c, {"n": n, "essential": essential})
    emb = is_embedded_sheets(c)
    if not emb:
        rep.passed = False
        rep.witness = {"collapsed_sheet": emb.witness}
        return rep
    idx = idx or PieceIndex(c.graph)
    for cyc in simple_cycles(c.graph):
        if not closed_path_label_nontrivial(c, cyc):
            continue
        rep.checked += 1
        try:
            dec = min_piece_decomposition(cyc, idx, essential)
        except NotDecomposable:
            continue
        if dec.count < n:
            rep.passed = False
            rep.witness = {"path": cyc, "label": path_label(c.graph, cyc), "decomposition": dec,
                           "piece_labels": [path_label(c.graph, q) for q in dec.pieces]}
            break
    return rep


def check_cprime_star(c: Completion, lam, essential: bool = True,
                      idx: Optional[PieceIndex] = None) -> ConditionReport:
    """C_*'(lambda) / Gr_*'(lambda): locally geodesic (essential) pieces on simple
    closed paths with nontrivial label are shorter than lambda times the path."""
    lam = as_fraction(lam)
    rep = _star_report("Grprime*" if essential else "Cprime*", c,
                       {"lambda": lam, "essential": essential})
    emb = is_embedded_sheets(c)
    if not emb:
        rep.passed = False
        rep.witness = {"collapsed_sheet": emb.witness}
        return rep
    idx = idx or PieceIndex(c.graph)
    for cyc in simple_cycles(c.graph):
        if not closed_path_label_nontrivial(c, cyc):
            continue
        rep.checked += 1
        m = len(cyc)
        L = idx.piece_lengths(cyc.darts, essential, closed=True)
        G = geodesic_lengths(c, cyc.darts, closed=True)
        for k in range(m):
            ln = min(int(L[k]), G[k])
            if ln > 0 and ln >= lam * m:
                rot = rotate_closed(c.graph, cyc, k)
                piece = PathSpec(rot.start, rot.steps[:ln])
                rep.passed = False
                rep.witness = {"cycle": cyc, "piece": piece,
                               "piece_label": path_label(c.graph, piece),
                               "piece_length": ln, "cycle_length": m}
                return rep
    return rep


def component_graph(c: Completion, comp: int) -> LabelledGraph:
    return c.graph.subgraph(c.graph.components[comp])


def components_isomorphic(g1: LabelledGraph, g2: LabelledGraph, budget: int = 2_000_000) -> bool:
    """Labelled-graph isomorphism of two finite (component) graphs."""
    return find_isomorphism(g1, g2, budget) is not None


def component_has_nontrivial_cycle(c: Completion, comp: int, max_cycles: int = 100_000) -> bool:
    sub = c.graph.subgraph(c.graph.components[comp])
    for k, cyc in enumerate(simple_cycles(sub)):
        if k >= max_cycles:
            break
        if not is_trivial_in_free_product(path_label(sub, cyc), c.factors):
            return True
    return False


def extracted_relators(c: Completion, max_len: Optional[int] = None) -> list:
    """Free-product normal forms of labels of nontrivial simple closed paths."""
    out = []
    seen = set()
    for cyc in simple_cycles(c.graph, max_len):
        nf = free_product_normal_form(path_label(c.graph, cyc), c.factors)
        if nf and tuple(nf) not in seen:
            seen.add(tuple(nf))
            out.append(nf)
    return out
