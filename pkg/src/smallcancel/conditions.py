"""C(n), Gr(n), C'(lambda) and Gr'(lambda) verdicts with re-checkable witnesses.

Closed paths are quantified over simple closed paths ("simple-cycle
scope"). check_gr can additionally scan every cyclically reduced closed
path up to a length bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .graph import LabelledGraph, PathSpec, gamma_R, path_label, simple_cycles
from .pieces import NotDecomposable, PieceIndex, RelatorPieces, min_piece_decomposition
from .words import Presentation, class_representative, sort_shortlex, RunWord

SCOPE = "simple-cycle scope"


@dataclass
class ConditionReport:
    condition: str
    params: dict
    passed: bool
    witness: Optional[dict] = None
    truncation: Optional[int] = None
    notes: list = field(default_factory=list)
    checked: int = 0  # closed paths or classes examined

    def __bool__(self):
        return self.passed


def as_fraction(lam) -> Fraction:
    if isinstance(lam, float):
        raise TypeError("lambda must be exact; pass a Fraction or a 'p/q' string")
    return Fraction(lam)


def _closed_paths_upto(g: LabelledGraph, max_len: int):
    """Closed non-backtracking, cyclically reduced paths up to max_len, one per rotation class start."""
    for s in range(g.n_vertices):
        stack = [(s, [], iter(g.out_darts[s]))]
        while stack:
            v, darts, it = stack[-1]
            d = next(it, None)
            if d is None:
                stack.pop()
                continue
            if darts and d == (darts[-1] ^ 1):
                continue
            nd = darts + [d]
            w = g.head(d)
            if w == s and nd[0] != (d ^ 1):
                yield PathSpec.from_darts(s, nd)
            if len(nd) < max_len:
                stack.append((w, nd, iter(g.out_darts[w])))


def check_gr(g: LabelledGraph, n: int, essential: bool = True, idx: Optional[PieceIndex] = None,
             exhaustive_len: Optional[int] = None) -> ConditionReport:
    """Gr(n): no simple closed path is a concatenation of fewer than n (essential) pieces."""
    idx = idx or PieceIndex(g)
    name = "Gr" if essential else "C-graph"
    rep = ConditionReport(name, {"n": n, "essential": essential}, True, notes=[SCOPE])
    paths = list(simple_cycles(g))
    if exhaustive_len:
        rep.notes.append(f"closed paths up to length {exhaustive_len} also scanned")
        paths += list(_closed_paths_upto(g, exhaustive_len))
    for cyc in paths:
        rep.checked += 1
        try:
            dec = min_piece_decomposition(cyc, idx, essential)
        except NotDecomposable:
            continue
        if dec.count < n:
            rep.passed = False
            rep.witness = {"path": cyc, "label": path_label(g, cyc), "decomposition": dec}
            break
    return rep


def check_grprime(g: LabelledGraph, lam, essential: bool = True,
                  idx: Optional[PieceIndex] = None) -> ConditionReport:
    """Gr'(lambda): every (essential) piece on a simple closed path gamma has |p| < lambda|gamma|."""
    lam = as_fraction(lam)
    idx = idx or PieceIndex(g)
    rep = ConditionReport("Grprime" if essential else "Cprime-graph",
                          {"lambda": lam, "essential": essential}, True, notes=[SCOPE])
    for cyc in simple_cycles(g):
        rep.checked += 1
        m = len(cyc)
        L = idx.piece_lengths(cyc.darts, essential, closed=True)
        k = int(L.argmax())
        if L[k] >= lam * m:
            from .graph import rotate_closed
            rot = rotate_closed(g, cyc, k)
            piece = PathSpec(rot.start, rot.steps[:int(L[k])])
            rep.passed = False
            rep.witness = {"cycle": cyc, "piece": piece, "piece_label": path_label(g, piece),
                           "piece_length": int(L[k]), "cycle_length": m}
            break
    return rep


def revalidate(g: LabelledGraph, report: ConditionReport, idx: Optional[PieceIndex] = None) -> bool:
    """Re-measure a graph fail witness from scratch."""
    if report.passed or report.witness is None:
        return False
    idx = idx or PieceIndex(g)
    ess = report.params.get("essential", True)
    w = report.witness
    if "decomposition" in w:
        dec = w["decomposition"]
        darts = []
        for pc in dec.pieces:
            if not idx.is_piece(pc.darts, ess):
                return False
            darts.extend(pc.darts)
        cyc = w["path"]
        m = len(cyc.darts)
        rotated = cyc.darts[dec.start:] + cyc.darts[:dec.start]
        return tuple(darts) == tuple(rotated) and len(dec.pieces) < report.params["n"] and m > 0
    piece = w["piece"]
    return idx.is_piece(piece.darts, ess) and \
        Fraction(len(piece)) >= report.params["lambda"] * w["cycle_length"]


# ------------------------------------------------------------ classical

def relator_classes(p: Presentation) -> list:
    """Shortlex class representatives of the relators, in shortlex order."""
    reps = {}
    for r in p.relators:
        rep = class_representative(r, p.alphabet)
        reps[RunWord.of(rep).runs] = rep
    return sort_shortlex(reps.values(), p.alphabet)


def relator_pieces(p: Presentation) -> tuple[list, RelatorPieces]:
    classes = relator_classes(p)
    return classes, RelatorPieces(classes)


def check_c_classical(p: Presentation, n: int, index=None) -> ConditionReport:
    """C(n): no relator is a product of fewer than n pieces."""
    classes, rp = index or relator_pieces(p)
    rep = ConditionReport("C", {"n": n}, True, truncation=p.truncation)
    for c in range(len(classes)):
        rep.checked += 1
        dec = rp.cyclic_decomposition(c, essential=True, below=n)
        if dec is not None and dec.count < n:
            rep.passed = False
            rep.witness = {"class": c, "relator": classes[c], "decomposition": dec}
            break
    return rep


def check_cprime_classical(p: Presentation, lam, index=None) -> ConditionReport:
    """C'(lambda): every piece of a relator r is shorter than lambda|r|."""
    lam = as_fraction(lam)
    classes, rp = index or relator_pieces(p)
    rep = ConditionReport("Cprime", {"lambda": lam}, True, truncation=p.truncation)
    for c in range(len(classes)):
        rep.checked += 1
        ri = 2 * c
        n = len(classes[c])
        best = (0, None)
        for s in rp._candidate_starts(ri, True):
            L = rp.piece_length(ri, s, True)
            if L > best[0]:
                best = (L, s)
        if best[0] >= lam * n:
            L, s = best
            rep.passed = False
            rep.witness = {"class": c, "relator": classes[c], "start": s, "piece_length": L,
                           "piece": classes[c][s:s + L] if s + L <= n else
                           (classes[c][s:] + classes[c][:s + L - n]),
                           "cycle_length": n}
            break
    return rep


def revalidate_classical(p: Presentation, report: ConditionReport) -> bool:
    if report.passed or report.witness is None:
        return False
    classes, rp = relator_pieces(p)
    w = report.witness
    c = w["class"]
    if classes[c] != w["relator"]:
        return False
    n = len(classes[c])
    if "decomposition" in w:
        pieces = w["decomposition"].pieces
        total = 0
        for start, k in pieces:
            if rp.piece_length(2 * c, start, True) < k or start != (pieces[0][0] + total) % n:
                return False
            total += k
        return total == n and len(pieces) < report.params["n"]
    return rp.piece_length(2 * c, w["start"], True) >= w["piece_length"] and \
        Fraction(w["piece_length"]) >= report.params["lambda"] * n


def check_c_via_graph(p: Presentation, n: int) -> ConditionReport:
    """C(n) through the literal Gamma_R graph; for cross-checking at small sizes."""
    g = gamma_R(p.relators, p.alphabet)
    rep = check_gr(g, n, essential=True)
    rep.condition = "C"
    rep.truncation = p.truncation
    return rep
