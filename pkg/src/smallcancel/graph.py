"""Oriented labelled graphs, paths, automorphisms and simple cycles.

Edges are numbered 0..m-1. Each edge e has two darts: 2e runs from its
source to its target and reads the label, 2e+1 runs backwards and reads
the inverse letter.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from .words import CyclicWord, Letter, Word, class_representative, letter_order


class TooLarge(RuntimeError):
    pass


DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class LabelledGraph:
    alphabet: tuple
    vertices: tuple  # vertex names, index = dense id
    edges: tuple  # (source, target, label)
    component_words: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "edges", tuple((int(s), int(t), str(a)) for s, t, a in self.edges))
        known = set(self.alphabet)
        n = len(self.vertices)
        for s, t, a in self.edges:
            if a not in known:
                raise ValueError(f"edge label {a!r} not in alphabet")
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError("edge endpoint out of range")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_darts(self) -> int:
        return 2 * len(self.edges)

    def tail(self, d: int) -> int:
        s, t, _ = self.edges[d >> 1]
        return t if d & 1 else s

    def head(self, d: int) -> int:
        s, t, _ = self.edges[d >> 1]
        return s if d & 1 else t

    def letter(self, d: int) -> Letter:
        return Letter(self.edges[d >> 1][2], -1 if d & 1 else 1)

    @cached_property
    def out_darts(self) -> tuple:
        out = [[] for _ in self.vertices]
        for d in range(self.n_darts):
            out[self.tail(d)].append(d)
        return tuple(tuple(x) for x in out)

    @cached_property
    def dart_by_letter(self) -> tuple:
        """Per vertex, letter -> list of darts leaving it with that letter."""
        out = []
        for v in range(self.n_vertices):
            m = {}
            for d in self.out_darts[v]:
                m.setdefault(self.letter(d), []).append(d)
            out.append(m)
        return tuple(out)

    @cached_property
    def components(self) -> tuple:
        comp = [-1] * self.n_vertices
        comps = []
        for v in range(self.n_vertices):
            if comp[v] >= 0:
                continue
            k = len(comps)
            comp[v] = k
            members = [v]
            queue = deque([v])
            while queue:
                u = queue.popleft()
                for d in self.out_darts[u]:
                    w = self.head(d)
                    if comp[w] < 0:
                        comp[w] = k
                        members.append(w)
                        queue.append(w)
            comps.append(tuple(sorted(members)))
        object.__setattr__(self, "_component_of", tuple(comp))
        return tuple(comps)

    @property
    def component_of(self) -> tuple:
        self.components
        return self._component_of

    def vertex_id(self, name: str) -> int:
        return self._name_index[name]

    @cached_property
    def _name_index(self):
        return {v: i for i, v in enumerate(self.vertices)}

    def subgraph(self, verts: Iterable[int]) -> "LabelledGraph":
        keep = sorted(set(verts))
        idx = {v: i for i, v in enumerate(keep)}
        edges = [(idx[s], idx[t], a) for s, t, a in self.edges if s in idx and t in idx]
        return LabelledGraph(self.alphabet, [self.vertices[v] for v in keep], edges)


class PathSpec(NamedTuple):
    start: int
    steps: tuple  # ((edge, +1|-1), ...)

    @property
    def darts(self) -> tuple:
        return tuple(2 * e + (0 if s == 1 else 1) for e, s in self.steps)

    @staticmethod
    def from_darts(start: int, darts: Sequence[int]) -> "PathSpec":
        return PathSpec(start, tuple((d >> 1, -1 if d & 1 else 1) for d in darts))

    def __len__(self):
        return len(self.steps)


Occurrence = PathSpec


def path_vertices(g: LabelledGraph, p: PathSpec) -> list[int]:
    vs = [p.start]
    for d in p.darts:
        if g.tail(d) != vs[-1]:
            raise ValueError("path steps are not incident")
        vs.append(g.head(d))
    return vs


def path_end(g: LabelledGraph, p: PathSpec) -> int:
    return path_vertices(g, p)[-1]


def path_label(g: LabelledGraph, p: PathSpec) -> Word:
    path_vertices(g, p)
    return tuple(g.letter(d) for d in p.darts)


def reverse_path(g: LabelledGraph, p: PathSpec) -> PathSpec:
    end = path_end(g, p)
    return PathSpec(end, tuple((e, -s) for e, s in reversed(p.steps)))


def is_closed(g: LabelledGraph, p: PathSpec) -> bool:
    return path_end(g, p) == p.start


def rotate_closed(g: LabelledGraph, p: PathSpec, k: int) -> PathSpec:
    vs = path_vertices(g, p)
    k %= max(1, len(p.steps))
    return PathSpec(vs[k], p.steps[k:] + p.steps[:k])


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def validate_reduced(g: LabelledGraph) -> Verdict:
    for v in range(g.n_vertices):
        for x, ds in g.dart_by_letter[v].items():
            if len(ds) > 1:
                return Verdict(False, (v, x))
    return Verdict(True)


def is_reduced(g: LabelledGraph) -> bool:
    return validate_reduced(g).ok


def cycle_graph(w: CyclicWord | Word, alphabet: Optional[Sequence[str]] = None, prefix: str = "") -> LabelledGraph:
    """Cycle reading w from vertex 0; vertex i sits before letter i."""
    rep = w.representative if isinstance(w, CyclicWord) else tuple(w)
    if not rep:
        raise ValueError("cycle needs at least one letter")
    if alphabet is None:
        alphabet = sorted({x.symbol for x in rep})
    n = len(rep)
    edges = []
    for i, x in enumerate(rep):
        j = (i + 1) % n
        edges.append((i, j, x.symbol) if x.sign == 1 else (j, i, x.symbol))
    return LabelledGraph(alphabet, [f"{prefix}{i}" for i in range(n)], edges, (rep,))


def disjoint_union(graphs: Sequence[LabelledGraph], alphabet=None) -> LabelledGraph:
    if alphabet is None:
        seen = []
        for h in graphs:
            for s in h.alphabet:
                if s not in seen:
                    seen.append(s)
        alphabet = seen
    verts, edges, words = [], [], []
    for h in graphs:
        off = len(verts)
        verts.extend(h.vertices)
        edges.extend((s + off, t + off, a) for s, t, a in h.edges)
        words.extend(h.component_words)
    return LabelledGraph(alphabet, verts, edges, tuple(words))


def gamma_R(relators: Iterable[CyclicWord | Word], alphabet: Sequence[str]) -> LabelledGraph:
    """One cycle per relator class, ordered by shortlex class representative."""
    reps = set()
    for r in relators:
        reps.add(class_representative(r, alphabet))
    rank = letter_order(alphabet)
    ordered = sorted(reps, key=lambda u: (len(u), tuple(rank[x] for x in u)))
    cycles = [cycle_graph(u, alphabet, prefix=f"r{k}.") for k, u in enumerate(ordered)]
    return disjoint_union(cycles, alphabet)


def find_occurrences(w: Sequence[Letter], g: LabelledGraph) -> list[PathSpec]:
    """All paths in g reading w, traversing edges in either direction."""
    if not w:
        return [PathSpec(v, ()) for v in range(g.n_vertices)]
    out = []
    for start in range(g.n_vertices):
        frontier = [(start, ())]
        for x in w:
            frontier = [(g.head(d), acc + (d,)) for v, acc in frontier
                        for d in g.dart_by_letter[v].get(x, ())]
        out.extend(PathSpec.from_darts(start, acc) for _, acc in frontier)
    return out


# ---------------------------------------------------------------- automorphisms

@dataclass(frozen=True)
class Morphism:
    vertex_map: tuple
    edge_map: tuple

    def dart(self, d: int) -> int:
        return 2 * self.edge_map[d >> 1] + (d & 1)


def is_morphism(g: LabelledGraph, h: LabelledGraph, m: Morphism) -> bool:
    for e, (s, t, a) in enumerate(g.edges):
        s2, t2, a2 = h.edges[m.edge_map[e]]
        if (m.vertex_map[s], m.vertex_map[t], a) != (s2, t2, a2):
            return False
    return True


def _signature(g: LabelledGraph, v: int):
    return tuple(sorted((x.symbol, x.sign, len(ds)) for x, ds in g.dart_by_letter[v].items()))


def _edge_counts(g: LabelledGraph):
    counts = {}
    for s, t, a in g.edges:
        counts[(s, t, a)] = counts.get((s, t, a), 0) + 1
    return counts


class _Budget:
    def __init__(self, limit):
        self.left = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise TooLarge("backtracking budget exhausted")


def _vertex_isomorphisms(g, comp_g, h, root, image, budget, find_all=True):
    """Vertex maps of a connected component of g into h sending root to image.

    Yields dicts; edges of g between mapped vertices are matched as multisets.
    """
    order = []
    parent_dart = {}
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        order.append(u)
        for d in g.out_darts[u]:
            w = g.head(d)
            if w not in seen:
                seen.add(w)
                parent_dart[w] = d
                queue.append(w)
    ce_g = _edge_counts(g)
    ce_h = _edge_counts(h)
    adj_g = {}
    for (s, t, a), c in ce_g.items():
        adj_g.setdefault(s, []).append((s, t, a, c))
        if s != t:
            adj_g.setdefault(t, []).append((s, t, a, c))
    mapping = {}
    used = set()

    def consistent(u, x):
        if _signature(g, u) != _signature(h, x):
            return False
        for s, t, a, c in adj_g.get(u, ()):
            if s in mapping or s == u:
                if t in mapping or t == u:
                    s2 = x if s == u else mapping[s]
                    t2 = x if t == u else mapping[t]
                    if ce_h.get((s2, t2, a), 0) != c:
                        return False
        return True

    def candidates(i):
        u = order[i]
        if i == 0:
            return iter([image])
        d = parent_dart[u]
        pu = mapping[g.tail(d)]
        return iter(sorted({h.head(d2) for d2 in h.dart_by_letter[pu].get(g.letter(d), ())}))

    # explicit stack so long components do not hit the recursion limit
    stack = [candidates(0)]
    while stack:
        budget.tick()
        i = len(stack) - 1
        u = order[i]
        if u in mapping:
            used.discard(mapping.pop(u))
        x = next((x for x in stack[-1] if x not in used and consistent(u, x)), None)
        if x is None:
            stack.pop()
            continue
        mapping[u] = x
        used.add(x)
        if i + 1 == len(order):
            yield dict(mapping)
        else:
            stack.append(candidates(i + 1))


def _complete_morphism(g, h, vmap) -> Morphism:
    """Extend a vertex map to an orientation-preserving edge map."""
    pools = {}
    for e, (s, t, a) in enumerate(h.edges):
        pools.setdefault((s, t, a), []).append(e)
    taken = {k: 0 for k in pools}
    emap = []
    for s, t, a in g.edges:
        key = (vmap[s], vmap[t], a)
        emap.append(pools[key][taken[key]])
        taken[key] += 1
    return Morphism(tuple(vmap), tuple(emap))


def find_isomorphism(g: LabelledGraph, h: LabelledGraph, budget: int = DEFAULT_BUDGET) -> Optional[Morphism]:
    """A label-preserving isomorphism g -> h, or None."""
    if (g.n_vertices, g.n_edges) != (h.n_vertices, h.n_edges):
        return None
    if sorted(_signature(g, v) for v in range(g.n_vertices)) != sorted(
            _signature(h, v) for v in range(h.n_vertices)):
        return None
    b = _Budget(budget)
    vmap = [None] * g.n_vertices
    used = set()

    def rec(ci):
        if ci == len(g.components):
            return True
        comp = g.components[ci]
        root = comp[0]
        for x in range(h.n_vertices):
            if x in used or len(h.components[h.component_of[x]]) != len(comp):
                continue
            for m in _vertex_isomorphisms(g, comp, h, root, x, b, find_all=False):
                if any(y in used for y in m.values()):
                    continue
                for u, y in m.items():
                    vmap[u] = y
                used.update(m.values())
                if rec(ci + 1):
                    return True
                used.difference_update(m.values())
            # one component of h may only host one of g's
        return False

    if not rec(0):
        return None
    mor = _complete_morphism(g, h, vmap)
    return mor if is_morphism(g, h, mor) else None


def is_isomorphic(g: LabelledGraph, h: LabelledGraph, budget: int = DEFAULT_BUDGET) -> bool:
    return find_isomorphism(g, h, budget) is not None


@dataclass(frozen=True)
class AutomorphismGroup:
    generators: tuple
    order: int
    vertex_orbit: tuple  # orbit id per vertex
    dart_orbit: tuple  # orbit id per dart

    def same_orbit_darts(self, d1: int, d2: int) -> bool:
        return self.dart_orbit[d1] == self.dart_orbit[d2]


def _orbit_ids(n, perms):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i in range(n):
            a, b = find(i), find(p[i])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return tuple(find(i) for i in range(n))


def automorphism_group(g: LabelledGraph, budget: int = DEFAULT_BUDGET) -> AutomorphismGroup:
    """Label-preserving automorphisms: generators, order and orbits."""
    from math import factorial

    b = _Budget(budget)
    comps = g.components
    # per component: all vertex automorphisms fixing nothing in particular
    comp_auts = []
    for comp in comps:
        root = comp[0]
        auts = []
        for x in comp:
            if _signature(g, x) != _signature(g, root):
                continue
            for m in _vertex_isomorphisms(g, comp, g, root, x, b):
                if set(m.values()) == set(comp):
                    auts.append(m)
        comp_auts.append(auts)
    # isomorphism classes of components
    classes = []
    for ci, comp in enumerate(comps):
        placed = False
        for cls in classes:
            cj = cls[0][0]
            other = comps[cj]
            if len(other) != len(comp):
                continue
            for x in comp:
                iso = next(iter(_vertex_isomorphisms(g, other, g, other[0], x, b)), None)
                if iso is not None and set(iso.values()) == set(comp):
                    cls.append((ci, iso))
                    placed = True
                    break
            if placed:
                break
        if not placed:
            classes.append([(ci, None)])

    order = 1
    gens = []
    ident = list(range(g.n_vertices))
    for cls in classes:
        m = len(cls)
        order *= len(comp_auts[cls[0][0]]) ** m * factorial(m)
        for ci, _ in cls:
            for a in comp_auts[ci]:
                if all(a[u] == u for u in a):
                    continue
                vm = list(ident)
                for u, x in a.items():
                    vm[u] = x
                gens.append(vm)
        # swaps of the first copy with each other copy
        for ci, iso in cls[1:]:
            vm = list(ident)
            for u, x in iso.items():
                vm[u] = x
                vm[x] = u
            gens.append(vm)
    counts = _edge_counts(g)
    for c in counts.values():
        order *= factorial(c)

    morphs = [_complete_morphism(g, g, vm) for vm in gens]
    # transpositions of parallel equally-labelled edges
    pools = {}
    for e, key in enumerate(g.edges):
        pools.setdefault(key, []).append(e)
    for key, es in pools.items():
        for e1 in es[1:]:
            em = list(range(g.n_edges))
            em[es[0]], em[e1] = e1, es[0]
            morphs.append(Morphism(tuple(ident), tuple(em)))
    vorb = _orbit_ids(g.n_vertices, [m.vertex_map for m in morphs])
    dperms = [[m.dart(d) for d in range(g.n_darts)] for m in morphs]
    dorb = _orbit_ids(g.n_darts, dperms)
    return AutomorphismGroup(tuple(morphs), order, vorb, dorb)


# ---------------------------------------------------------------- simple cycles

def simple_cycles(g: LabelledGraph, max_len: Optional[int] = None) -> Iterator[PathSpec]:
    """Vertex-simple closed paths of the underlying multigraph, each once.

    Each cycle starts at its least vertex; of the two directions the one
    with the smaller dart sequence is kept.
    """
    n = g.n_vertices
    removed = [False] * n
    deg = [len(g.out_darts[v]) for v in range(n)]
    # prune trees hanging off the graph: they lie on no cycle
    stack = [v for v in range(n) if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if removed[v]:
            continue
        removed[v] = True
        for d in g.out_darts[v]:
            w = g.head(d)
            if not removed[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    stack.append(w)
    for s in range(n):
        if removed[s]:
            continue
        on_path = [False] * n
        on_path[s] = True
        darts: list = []
        iters = [iter(g.out_darts[s])]
        cur = [s]
        while iters:
            d = next(iters[-1], None)
            if d is None:
                iters.pop()
                v = cur.pop()
                if darts:
                    darts.pop()
                if v != s:
                    on_path[v] = False
                continue
            w = g.head(d)
            if darts and (d >> 1) == (darts[-1] >> 1):
                continue
            if w == s:
                cyc = darts + [d]
                if max_len is None or len(cyc) <= max_len:
                    rev = [x ^ 1 for x in reversed(cyc)]
                    if cyc <= rev:
                        yield PathSpec.from_darts(s, cyc)
                continue
            if w < s or removed[w] or on_path[w]:
                continue
            if max_len is not None and len(darts) + 1 >= max_len:
                continue
            on_path[w] = True
            darts.append(d)
            cur.append(w)
            iters.append(iter(g.out_darts[w]))
        removed[s] = True
        # vertices left with degree <= 1 can no longer be on a cycle
        for d in g.out_darts[s]:
            w = g.head(d)
            if not removed[w]:
                deg[w] -= 1
        stack = [v for v in range(n) if not removed[v] and deg[v] <= 1]
        while stack:
            v = stack.pop()
            if removed[v]:
                continue
            removed[v] = True
            for d in g.out_darts[v]:
                w = g.head(d)
                if not removed[w]:
                    deg[w] -= 1
                    if deg[w] <= 1:
                        stack.append(w)
