"""Selection of 16 (relator, x, y) tuples and the W-sets built from them.

The search is a deterministic backtracking over per-unit options. A unit
is a relator class (classical) or a completion component (graphical); an
option is a pair (x, y) with piece distance at least 3, kept once per
pair of vertex signatures since the linking constraint only sees
signatures. Consecutive tuples k, k+1 need disjoint signatures except
across the seams 8|9 and after 16.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import inf
from typing import Optional

from .completion import (Completion, check_gr_star, component_has_nontrivial_cycle,
                         components_isomorphic)
from .conditions import check_c_classical, relator_classes
from .graph import LabelledGraph
from .pieces import PieceIndex, RelatorPieces, piece_reach, within_two_pieces
from .words import (Letter, Presentation, RunWord, concise_refinement, inverse,
                    tietze_reduce)

TUPLES = 16
SEAMS = (8, 16)
ALPHA = ("alpha1", "alpha2")


class InsufficientRelators(ValueError):
    pass


class InsufficientComponents(ValueError):
    pass


class NoInteriorVertex(ValueError):
    pass


class SearchExhausted(RuntimeError):
    pass


class NotC6(ValueError):
    pass


class SymbolClash(ValueError):
    pass


@dataclass
class WitnessPackage:
    mode: str
    tuples: list  # (unit id, x, y)
    units: list  # class words (classical) or component vertex lists (graphical)
    W1: list = field(default_factory=list)
    W2: list = field(default_factory=list)
    extended: Optional[Presentation] = None
    notes: list = field(default_factory=list)


def _linked(k):
    """Whether tuple k (1-based) must have support disjoint from tuple k+1."""
    return k not in SEAMS


def _backtrack(options: list, budget: int):
    """options[u] = {(sig_x, sig_y): (x, y)}; returns [(u, x, y)] * 16 or None."""
    order = list(range(len(options)))
    chosen = []
    used = set()
    nodes = [0]

    def rec(k, prev_sig):
        if k > TUPLES:
            return True
        for u in order:
            if u in used:
                continue
            for (sx, sy), (x, y) in options[u].items():
                nodes[0] += 1
                if nodes[0] > budget:
                    raise SearchExhausted("node budget exceeded")
                if prev_sig is not None and not sx.isdisjoint(prev_sig):
                    continue
                used.add(u)
                chosen.append((u, x, y))
                if rec(k + 1, sy if _linked(k) else None):
                    return True
                chosen.pop()
                used.discard(u)
        return False

    return list(chosen) if rec(1, None) else None


# ------------------------------------------------------------ classical

def _supp(word, n, v) -> frozenset:
    return frozenset((word[v % n], word[(v - 1) % n].inv()))


def _probe_vertices(rp: RelatorPieces, c: int) -> list:
    """Run boundaries plus one interior vertex per run, in increasing order."""
    rd = rp.readings[2 * c]
    out = set()
    for s, k in zip(rd.starts, rd.lens):
        out.add(s % rd.n)
        if k >= 2:
            out.add((s + 1) % rd.n)
        if k >= 3:
            out.add((s + k - 1) % rd.n)
    return sorted(out)


def _class_options(rp: RelatorPieces, c: int) -> dict:
    w = rp.words[c]
    n = len(w)
    probes = _probe_vertices(rp, c)
    opts = {}
    for x in probes:
        fwd = rp.reach(2 * c, rp.position_of(c, 1, x), 2)
        bwd = rp.reach(2 * c + 1, rp.position_of(c, -1, x), 2)
        if fwd == inf or bwd == inf or fwd + bwd >= n - 1:
            continue
        lo, hi = x + fwd + 1, x + n - bwd - 1  # y offsets strictly beyond both 2-piece reaches
        cands = set()
        for y in probes + [lo % n, hi % n]:
            off = (y - x) % n
            if lo - x <= off <= hi - x:
                cands.add(y % n)
        sx = _supp(w, n, x)
        for y in sorted(cands):
            key = (sx, _supp(w, n, y))
            if key not in opts and rp.arc_count(c, x, y) >= 3:
                opts[key] = (x, y)
    return opts


def reduce_for_witness(p: Presentation) -> Presentation:
    return tietze_reduce(concise_refinement(p))


def select_witnesses_classical(p: Presentation, budget: int = 2_000_000,
                               check_c6: bool = True) -> WitnessPackage:
    """16 tuples over distinct relator classes; pieces are measured in the full relator set."""
    classes = relator_classes(p)
    rp = RelatorPieces(classes)
    if check_c6:
        rep = check_c_classical(p, 6, index=(classes, rp))
        if not rep.passed:
            raise NotC6(f"presentation is not C(6): class {rep.witness['class']}")
    kept = relator_classes(reduce_for_witness(p))
    keep = {RunWord.of(w).runs for w in kept}
    units = [c for c, w in enumerate(classes) if RunWord.of(w).runs in keep]
    if len(units) < TUPLES:
        raise InsufficientRelators(f"{len(units)} relator classes, need {TUPLES}")
    options = [_class_options(rp, c) for c in units]
    found = _backtrack(options, budget)
    if found is None:
        raise SearchExhausted("no assignment of 16 tuples exists")
    tuples = [(units[u], x, y) for u, x, y in found]
    pkg = WitnessPackage("classical", tuples, [classes[c] for c in range(len(classes))])
    pkg.W1, pkg.W2 = build_w_sets(tuples, classes, "classical")
    pkg.extended = extended_presentation(p, pkg.W1, pkg.W2)
    return pkg


def cycle_arc_labels(w, x: int, y: int) -> list:
    """Labels of the two simple paths x -> y on the cycle of w (forwards, then backwards)."""
    w = RunWord.of(w)
    n = len(w)
    doubled = w + w
    fwd = doubled[x:x + (y - x) % n] if (y - x) % n else RunWord(())
    back_len = (x - y) % n
    start = y % n
    back = inverse(doubled[start:start + back_len]) if back_len else RunWord(())
    return [fwd, back]


# ------------------------------------------------------------ graphical

def _factor_sig(c: Completion, v: int) -> frozenset:
    return frozenset(c.sheet_factor[s] for s in c.sheets_at(v))


def qualifying_components(c: Completion, budget: int = 2_000_000) -> list:
    """Pairwise non-isomorphic components with a closed path of nontrivial label."""
    kept, graphs = [], []
    for k in range(len(c.graph.components)):
        if not component_has_nontrivial_cycle(c, k):
            continue
        sub = c.graph.subgraph(c.graph.components[k])
        if any(components_isomorphic(sub, h, budget) for h in graphs):
            continue
        kept.append(k)
        graphs.append(sub)
    return kept


def _component_options(c: Completion, idx: PieceIndex, comp: int, probes: int = 4) -> dict:
    g = c.graph
    verts = list(g.components[comp])
    interior = [v for v in verts if len(c.sheets_at(v)) == 1]
    by_sig = {}
    for v in verts:
        by_sig.setdefault(_factor_sig(c, v), []).append(v)
    opts = {}
    ysig = {}
    for v in interior:
        ysig.setdefault(_factor_sig(c, v), []).append(v)
    for sx, xs in by_sig.items():
        for x in xs[:probes]:
            rx = piece_reach(idx, x)
            for sy, ys in ysig.items():
                if (sx, sy) in opts:
                    continue
                for y in ys:
                    if not within_two_pieces(idx, x, y, reach_x=rx):
                        opts[(sx, sy)] = (x, y)
                        break
    return opts


def select_witnesses_graphical(c: Completion, budget: int = 2_000_000,
                               check_star: bool = True) -> WitnessPackage:
    if check_star:
        rep = check_gr_star(c, 6)
        if not rep.passed:
            raise NotC6("completion is not Gr_*(6)")
    comps = qualifying_components(c)
    if len(comps) < TUPLES:
        raise InsufficientComponents(f"{len(comps)} qualifying components, need {TUPLES}")
    idx = PieceIndex(c.graph)
    options, units, empty = [], [], []
    for k in comps:
        o = _component_options(c, idx, k)
        if o:
            options.append(o)
            units.append(k)
        else:
            empty.append(k)
    if len(units) < TUPLES:
        if empty:
            raise NoInteriorVertex(f"components {empty} have no interior vertex at piece distance 3")
        raise InsufficientComponents(f"{len(units)} usable components")
    found = _backtrack(options, budget)
    if found is None:
        raise SearchExhausted("no assignment of 16 tuples exists")
    tuples = [(units[u], x, y) for u, x, y in found]
    pkg = WitnessPackage("graphical", tuples, [list(vs) for vs in c.graph.components])
    pkg.W1, pkg.W2 = build_w_sets(tuples, c.graph, "graphical")
    pkg.notes.append("blocks range over simple paths only")
    return pkg


def simple_path_labels(g: LabelledGraph, x: int, y: int, limit: int = 4096) -> list:
    out = []
    stack = [(x, [], {x})]
    while stack:
        v, darts, seen = stack.pop()
        if v == y and darts:
            out.append(tuple(g.letter(d) for d in darts))
            if len(out) > limit:
                raise SearchExhausted("too many simple paths")
            continue
        for d in reversed(g.out_darts[v]):
            w = g.head(d)
            if w in seen and w != y:
                continue
            if w == y and w in seen and w != x:
                continue
            stack.append((w, darts + [d], seen | {w}))
    return sorted(set(out))


# ------------------------------------------------------------ W-sets

def build_w_sets(tuples, source, mode: str):
    """W_i = alpha_i^-1 followed by one block per tuple of its half, over all block choices."""
    blocks = []
    for u, x, y in tuples:
        if mode == "classical":
            blocks.append(cycle_arc_labels(source[u], x, y))
        else:
            blocks.append([RunWord.of(lab) for lab in simple_path_labels(source, x, y)])
    W = []
    for i, sym in enumerate(ALPHA):
        half = blocks[8 * i:8 * i + 8]
        words = []
        for choice in product(*half):
            w = RunWord([(Letter(sym, -1), 1)])
            for b in choice:
                w = w + b
            words.append(w)
        W.append(words)
    return W[0], W[1]


def extended_presentation(p: Presentation, W1, W2) -> Presentation:
    for a in ALPHA:
        if a in p.alphabet:
            raise SymbolClash(f"{a} already names a generator")
    return Presentation(tuple(p.alphabet) + ALPHA, list(W1) + list(W2) + list(p.relators),
                        truncation=p.truncation)


# ------------------------------------------------------------ verification

@dataclass
class Verification:
    ok: bool
    failures: list


def verify_classical(p: Presentation, pkg: WitnessPackage) -> Verification:
    classes = relator_classes(p)
    rp = RelatorPieces(classes)
    bad = []
    ids = [u for u, _, _ in pkg.tuples]
    if len(ids) != TUPLES or len(set(ids)) != TUPLES:
        bad.append("classes not pairwise distinct")
    for k, (u, x, y) in enumerate(pkg.tuples, 1):
        d = rp.arc_count(u, x, y)
        if d < 3:
            bad.append(f"tuple {k}: piece distance {d}")
    for k in range(1, TUPLES):
        if not _linked(k):
            continue
        u, _, y = pkg.tuples[k - 1]
        v, x, _ = pkg.tuples[k]
        wu, wv = classes[u], classes[v]
        if not _supp(wu, len(wu), y).isdisjoint(_supp(wv, len(wv), x)):
            bad.append(f"supports of y{k} and x{k + 1} meet")
    bad += _verify_words(pkg, expect=256)
    return Verification(not bad, bad)


def verify_graphical(c: Completion, pkg: WitnessPackage) -> Verification:
    idx = PieceIndex(c.graph)
    bad = []
    ids = [u for u, _, _ in pkg.tuples]
    if len(set(ids)) != TUPLES:
        bad.append("components not pairwise distinct")
    for k, (u, x, y) in enumerate(pkg.tuples, 1):
        if within_two_pieces(idx, x, y):
            bad.append(f"tuple {k}: piece distance below 3")
        if len(c.sheets_at(y)) != 1:
            bad.append(f"tuple {k}: y is not interior")
    for k in range(1, TUPLES):
        if _linked(k):
            y = pkg.tuples[k - 1][2]
            x = pkg.tuples[k][1]
            if not _factor_sig(c, y).isdisjoint(_factor_sig(c, x)):
                bad.append(f"y{k} and x{k + 1} share a factor")
    bad += _verify_words(pkg, expect=None)
    return Verification(not bad, bad)


def _verify_words(pkg, expect):
    bad = []
    for i, W in enumerate((pkg.W1, pkg.W2)):
        if expect is not None and len(W) != expect:
            bad.append(f"|W{i + 1}| = {len(W)}")
        for w in W:
            if w[0] != Letter(ALPHA[i], -1):
                bad.append(f"W{i + 1} word does not start with alpha{i + 1}^-1")
                break
            if not _is_reduced(w):
                bad.append(f"W{i + 1} word has a cancelling joint")
                break
    return bad


def _is_reduced(w: RunWord) -> bool:
    runs = w.runs
    return all(runs[k][0] != runs[k + 1][0].inv() for k in range(len(runs) - 1))
