"""Pieces, essential pieces, minimal piece decompositions, piece distance, support.

Two indexes share one notion of piece:

* PieceIndex works on any finite reduced labelled graph. Along a query
  path it runs the fiber product of the path with the graph as a vector
  recurrence over darts, so the longest piece starting at every position
  comes out in one backward sweep.
* RelatorPieces works on the disjoint union of relator cycles, stored run
  length encoded. It gives the same answers as PieceIndex on the literal
  cycle graph but never expands a relator, which matters for blocks like
  b^(2^30).

In a reduced graph an occurrence of a word is fixed by its first dart, so
two occurrences are distinct iff their first darts differ, and they are
related by an automorphism iff their first darts share an orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf
from typing import Optional, Sequence

import numpy as np

from .graph import (AutomorphismGroup, LabelledGraph, PathSpec, automorphism_group,
                    path_vertices, validate_reduced)
from .words import CyclicWord, _cyclic_runs, is_proper_power


class NotDecomposable(ValueError):
    def __init__(self, msg, position=None):
        super().__init__(msg)
        self.position = position


@dataclass(frozen=True)
class Decomposition:
    count: int
    pieces: tuple  # PathSpecs (graph index) or (start, length) pairs (relator index)
    start: int = 0  # rotation used for closed paths


class PieceIndex:
    """Longest (essential) pieces along paths of a reduced labelled graph."""

    def __init__(self, g: LabelledGraph, aut: Optional[AutomorphismGroup] = None,
                 budget: int = 2_000_000):
        v = validate_reduced(g)
        if not v.ok:
            raise ValueError(f"graph is not reduced at vertex {v.witness[0]}")
        self.g = g
        self.aut = aut if aut is not None else automorphism_group(g, budget)
        letters = sorted({g.letter(d) for d in range(g.n_darts)})
        self.letters = letters
        self.letter_index = {x: i for i, x in enumerate(letters)}
        D = g.n_darts
        self.letter_id = np.array([self.letter_index[g.letter(d)] for d in range(D)] + [-1],
                                  dtype=np.int64)
        # nxt[x, d]: the dart leaving head(d) with letter x; D is the sentinel
        nxt = np.full((max(1, len(letters)), D + 1), D, dtype=np.int64)
        for d in range(D):
            for x, ds in g.dart_by_letter[g.head(d)].items():
                nxt[self.letter_index[x], d] = ds[0]
        self.nxt = nxt
        self.orbit = np.array(list(self.aut.dart_orbit) + [-1], dtype=np.int64)
        self._table = {}

    def piece_lengths(self, darts: Sequence[int], essential: bool = False,
                      closed: bool = False) -> np.ndarray:
        """Longest piece starting at each position of the dart sequence.

        For closed paths the sequence is read cyclically and lengths are
        capped at its length.
        """
        q = list(darts)
        m = len(q)
        if m == 0:
            return np.zeros(0, dtype=np.int64)
        seq = q + q if closed else q
        D = self.g.n_darts
        lid = self.letter_id
        out = np.zeros(len(seq), dtype=np.int64)
        R_next = np.zeros(D + 1, dtype=np.int64)
        for k in range(len(seq) - 1, -1, -1):
            x = lid[seq[k]]
            if k + 1 < len(seq):
                cont = R_next[self.nxt[lid[seq[k + 1]]]]
            else:
                cont = np.zeros(D + 1, dtype=np.int64)
            R = np.where(lid == x, 1 + cont, 0)
            R[D] = 0
            saved = R[seq[k]]
            R[seq[k]] = 0
            if essential:
                masked = np.where(self.orbit == self.orbit[seq[k]], 0, R)
                out[k] = masked.max()
            else:
                out[k] = R.max()
            R[seq[k]] = saved
            R_next = R
        if closed:
            return np.minimum(out[:m], m)
        return out

    def piece_lengths_many(self, paths, essential: bool = False) -> np.ndarray:
        """piece_lengths for many open paths of one common length, as a (P, L) array."""
        seq = np.asarray(paths, dtype=np.int64)
        if seq.ndim != 2 or seq.shape[0] == 0:
            return np.zeros((len(seq), 0), dtype=np.int64)
        P, L = seq.shape
        D = self.g.n_darts
        lid = self.letter_id
        rows = np.arange(P)
        out = np.zeros((P, L), dtype=np.int64)
        R_next = np.zeros((P, D + 1), dtype=np.int64)
        for k in range(L - 1, -1, -1):
            x = lid[seq[:, k]]
            if k + 1 < L:
                cont = np.take_along_axis(R_next, self.nxt[lid[seq[:, k + 1]]], axis=1)
            else:
                cont = np.zeros((P, D + 1), dtype=np.int64)
            R = np.where(lid[None, :] == x[:, None], 1 + cont, 0)
            R[:, D] = 0
            saved = R[rows, seq[:, k]]
            R[rows, seq[:, k]] = 0
            if essential:
                own = self.orbit[seq[:, k]]
                out[:, k] = np.where(self.orbit[None, :] == own[:, None], 0, R).max(axis=1)
            else:
                out[:, k] = R.max(axis=1)
            R[rows, seq[:, k]] = saved
            R_next = R
        return out

    def is_piece(self, darts: Sequence[int], essential: bool = False) -> bool:
        if not darts:
            return False
        return int(self.piece_lengths(darts, essential)[0]) >= len(darts)

    def max_piece_from(self, d: int, essential: bool = False) -> float:
        """Longest piece whose first dart is d (inf if unbounded)."""
        key = (d, essential)
        if key not in self._table:
            self._table[key] = self._longest_pair_path(d, essential)
        return self._table[key]

    def _longest_pair_path(self, d0: int, essential: bool) -> float:
        g = self.g
        D = g.n_darts
        lid = self.letter_id
        starts = [d for d in range(D) if d != d0 and lid[d] == lid[d0]
                  and (not essential or self.orbit[d] != self.orbit[d0])]
        memo = {}
        best = 0
        for s in starts:
            best = max(best, self._pair_dfs((d0, s), memo))
        return best

    def _pair_dfs(self, root, memo):
        # iterative longest path in the pair graph; a cycle means inf
        g = self.g
        D = g.n_darts
        state = {}
        stack = [(root, None)]
        while stack:
            node, it = stack[-1]
            if it is None:
                if node in memo:
                    stack.pop()
                    continue
                if state.get(node) == 1:
                    memo[node] = inf
                    stack.pop()
                    continue
                state[node] = 1
                d1, d2 = node
                succ = []
                for xi in range(self.nxt.shape[0]):
                    e1, e2 = self.nxt[xi, d1], self.nxt[xi, d2]
                    if e1 == D or e2 == D or e1 == (d1 ^ 1) or e2 == (d2 ^ 1):
                        continue
                    succ.append((int(e1), int(e2)))
                stack[-1] = (node, iter(succ))
                continue
            nxt = next(it, None)
            if nxt is None:
                d1, d2 = node
                val = 1
                for xi in range(self.nxt.shape[0]):
                    e1, e2 = self.nxt[xi, d1], self.nxt[xi, d2]
                    if e1 == D or e2 == D or e1 == (d1 ^ 1) or e2 == (d2 ^ 1):
                        continue
                    val = max(val, 1 + memo[(int(e1), int(e2))])
                memo[node] = val
                state[node] = 2
                stack.pop()
                continue
            if nxt in memo:
                continue
            if state.get(nxt) == 1:
                memo[nxt] = inf
                continue
            stack.append((nxt, None))
        return memo[root]


def build_piece_index(g: LabelledGraph, budget: int = 2_000_000) -> PieceIndex:
    return PieceIndex(g, budget=budget)


def _greedy(L, start, m, cyclic):
    pos, cuts = start, []
    while pos < start + m:
        step = int(L[pos % m]) if cyclic else int(L[pos])
        if step <= 0:
            return None
        step = min(step, start + m - pos)
        cuts.append((pos, step))
        pos += step
    return cuts


def _decompose(L, m, cyclic):
    if m == 0:
        return [], 0
    zero = np.flatnonzero(np.asarray(L[:m]) == 0)
    if len(zero):
        raise NotDecomposable("edge lies on no piece", int(zero[0]))
    if not cyclic:
        return _greedy(L, 0, m, False), 0
    best, best_start = None, 0
    # every cover has a cut point in [0, L[0]]; greedy from a cut is optimal
    for s in range(0, min(int(L[0]), m - 1) + 1):
        cuts = _greedy(L, s, m, True)
        if best is None or len(cuts) < len(best):
            best, best_start = cuts, s
    return best, best_start


def min_piece_decomposition(p: PathSpec, idx: PieceIndex, essential: bool = False) -> Decomposition:
    """Fewest (essential) pieces concatenating to p; closed paths minimise over rotations."""
    g = idx.g
    vs = path_vertices(g, p)
    darts = p.darts
    m = len(darts)
    closed = m > 0 and vs[-1] == vs[0]
    L = idx.piece_lengths(darts, essential, closed)
    cuts, start = _decompose(L, m, closed)
    pieces = []
    for pos, k in cuts:
        sub = [darts[(pos + i) % m] for i in range(k)]
        pieces.append(PathSpec.from_darts(vs[pos % m], sub))
    return Decomposition(len(pieces), tuple(pieces), start)


def decomposition_count(darts: Sequence[int], idx: PieceIndex, essential: bool, closed: bool):
    """Piece count or None when some edge lies on no piece."""
    L = idx.piece_lengths(darts, essential, closed)
    try:
        cuts, _ = _decompose(L, len(darts), closed)
    except NotDecomposable:
        return None
    return len(cuts)


def cycle_arcs(g: LabelledGraph, x: int, y: int) -> list[list[int]]:
    """The two dart sequences from x to y along the cycle component through x."""
    comp = g.components[g.component_of[x]]
    if any(len(g.out_darts[v]) != 2 for v in comp):
        raise ValueError("vertex is not on a cycle component")
    if g.component_of[y] != g.component_of[x]:
        raise ValueError("vertices lie on different components")
    arcs = []
    for d0 in g.out_darts[x]:
        seq, d = [], d0
        while True:
            seq.append(d)
            v = g.head(d)
            if v == y:
                break
            d = next(e for e in g.out_darts[v] if e != (d ^ 1))
        arcs.append(seq)
    return arcs


def piece_distance(g: LabelledGraph, idx: PieceIndex, x: int, y: int,
                   essential: bool = True) -> float:
    """Least number of pieces concatenating to an arc from x to y; inf if none."""
    if x == y:
        return 0
    best = inf
    for arc in cycle_arcs(g, x, y):
        c = decomposition_count(arc, idx, essential, closed=False)
        if c is not None:
            best = min(best, c)
    return best


def piece_reach(idx: PieceIndex, v: int, essential: bool = True) -> set:
    """Vertices y such that some (essential) piece runs from v to y."""
    g = idx.g
    D = g.n_darts
    lid, nxt, orbit = idx.letter_id, idx.nxt, idx.orbit
    out = set()
    seen = set()
    stack = []
    for d in g.out_darts[v]:
        mask = (lid[:D] == lid[d])
        mask[d] = False
        if essential:
            mask &= orbit[:D] != orbit[d]
        alive = np.flatnonzero(mask)
        if len(alive):
            stack.append((d, alive))
    while stack:
        d, alive = stack.pop()
        key = (d, alive.tobytes())
        if key in seen:
            continue
        seen.add(key)
        out.add(g.head(d))
        for e in g.out_darts[g.head(d)]:
            if e == (d ^ 1):
                continue
            nx = nxt[lid[e], alive]
            nx = nx[nx != D]
            if len(nx):
                stack.append((e, np.unique(nx)))
    return out


def within_two_pieces(idx: PieceIndex, x: int, y: int, essential: bool = True,
                      reach_x: Optional[set] = None) -> bool:
    """d_p(x, y) <= 2: the one-piece balls around x and y meet (pieces reverse to pieces)."""
    if x == y:
        return True
    bx = (reach_x if reach_x is not None else piece_reach(idx, x, essential)) | {x}
    by = piece_reach(idx, y, essential) | {y}
    return not bx.isdisjoint(by)


def support(g: LabelledGraph, v: int) -> frozenset:
    return frozenset(g.letter(d) for d in g.out_darts[v])


# ------------------------------------------------------ run-level relator index

class _Reading:
    __slots__ = ("comp", "dir", "n", "period", "letters", "lens", "starts", "off", "ends")

    def __init__(self, comp, direction, w):
        self.comp, self.dir = comp, direction
        self.n = len(w)
        pp = is_proper_power(w)
        self.period = len(pp[0]) if pp else self.n
        cyc, off = _cyclic_runs(w)
        self.letters = [x for x, _ in cyc]
        self.lens = [k for _, k in cyc]
        self.off = off
        acc, ends = 0, []
        for k in self.lens:
            acc += k
            ends.append(acc)
        self.ends = ends
        self.starts = [(e - k - off) % self.n for e, k in zip(ends, self.lens)]

    def locate(self, pos):
        """Run index and offset of a position (mod n)."""
        q = (pos + self.off) % self.n
        lo, hi = 0, len(self.ends)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.ends[mid] <= q:
                lo = mid + 1
            else:
                hi = mid
        return lo, q - (self.ends[lo] - self.lens[lo])


class RelatorPieces:
    """Pieces among relator cycles, computed on runs.

    Readings are indexed 2c (class c read forwards) and 2c+1 (read
    backwards, i.e. the inverse word). Position j of reading 2c sits at
    vertex j of the class cycle; position j of reading 2c+1 sits at vertex
    (n - j) mod n.
    """

    def __init__(self, classes: Sequence, essential_default: bool = True):
        self.words = []
        self.readings = []
        for c, w in enumerate(classes):
            rep = w.representative if isinstance(w, CyclicWord) else w
            CyclicWord(rep)
            self.words.append(rep)
            from .words import inverse
            self.readings.append(_Reading(c, 1, rep))
            self.readings.append(_Reading(c, -1, inverse(rep)))
        self.by_letter = {}
        for ri, rd in enumerate(self.readings):
            for b, x in enumerate(rd.letters):
                self.by_letter.setdefault(x, []).append((ri, b))
        self._ext = {}
        self._L = {}

    def vertex_of(self, ri: int, pos: int) -> int:
        rd = self.readings[ri]
        return pos % rd.n if rd.dir == 1 else (rd.n - pos) % rd.n

    def position_of(self, c: int, direction: int, vertex: int) -> int:
        n = self.readings[2 * c].n
        return vertex % n if direction == 1 else (n - vertex) % n

    def _ext_runs(self, ri, a, rj, b):
        key = (ri, a, rj, b)
        if key in self._ext:
            return self._ext[key]
        A, B = self.readings[ri], self.readings[rj]
        RA, RB = len(A.lens), len(B.lens)
        acc = 0
        i, j = a % RA, b % RB
        val = inf
        for _ in range(RA + RB + 2):
            if A.letters[i] != B.letters[j]:
                val = acc
                break
            if A.lens[i] == B.lens[j]:
                acc += A.lens[i]
                i, j = (i + 1) % RA, (j + 1) % RB
                continue
            val = acc + min(A.lens[i], B.lens[j])
            break
        self._ext[key] = val
        return val

    def _excluded(self, ri, pos, rj, pos2, essential):
        if ri != rj:
            return False
        rd = self.readings[ri]
        if essential:
            return (pos - pos2) % rd.period == 0
        return (pos - pos2) % rd.n == 0

    def longest_piece(self, ri: int, pos: int, essential: bool = True):
        """(length, partner reading, partner position) of the longest piece at pos."""
        rd = self.readings[ri]
        a, t = rd.locate(pos)
        rho = rd.lens[a] - t
        key = (ri, a, rho, essential, pos % rd.period if essential else pos % rd.n)
        hit = self._L.get(key)
        if hit is not None:
            return hit
        x = rd.letters[a]
        best = (0, None, None)
        # a reading made of one cyclic run repeats its letter forever
        mono = len(rd.lens) == 1
        for rj, b in self.by_letter.get(x, ()):
            B = self.readings[rj]
            nb, Sb = B.lens[b], B.starts[b]
            other_mono = len(B.lens) == 1
            if mono or other_mono:
                limit = min(nb, 2 * rd.period + 4)
                for s in range(limit):
                    p2 = (Sb + s) % B.n
                    if self._excluded(ri, pos, rj, p2, essential):
                        continue
                    if mono and other_mono:
                        val = rd.n
                    elif mono:
                        val = nb - s
                    else:
                        val = rho
                    val = min(val, rd.n)
                    if val > best[0]:
                        best = (val, rj, p2)
                    break
                continue
            s_al = nb - rho if nb >= rho else None
            if s_al is not None:
                p2 = (Sb + s_al) % B.n
                if not self._excluded(ri, pos, rj, p2, essential):
                    val = min(rho + self._ext_runs(ri, a + 1, rj, b + 1), rd.n)
                    if val > best[0]:
                        best = (val, rj, p2)
            limit = min(nb, 2 * rd.period + 4)
            for s in range(limit):
                if s == s_al:
                    continue
                p2 = (Sb + s) % B.n
                if self._excluded(ri, pos, rj, p2, essential):
                    continue
                val = min(rho, nb - s)
                if val > best[0]:
                    best = (val, rj, p2)
                break
        self._L[key] = best
        return best

    def piece_length(self, ri, pos, essential=True) -> int:
        return self.longest_piece(ri, pos, essential)[0]

    def greedy(self, ri: int, pos: int, m: int, essential: bool = True, limit=None):
        """Greedy cover of m letters from pos; None if stuck."""
        cuts, covered = [], 0
        while covered < m:
            if limit is not None and len(cuts) >= limit:
                return cuts + [None]
            L = self.piece_length(ri, pos + covered, essential)
            if L <= 0:
                return None
            step = min(L, m - covered)
            cuts.append(((pos + covered) % self.readings[ri].n, step))
            covered += step
        return cuts

    def arc_count(self, c: int, x: int, y: int, essential: bool = True) -> float:
        """Piece distance between vertices x, y of class cycle c."""
        if x == y:
            return 0
        n = self.readings[2 * c].n
        best = inf
        for direction in (1, -1):
            ri = 2 * c + (0 if direction == 1 else 1)
            pos = self.position_of(c, direction, x)
            m = (y - x) % n if direction == 1 else (x - y) % n
            cuts = self.greedy(ri, pos, m, essential)
            if cuts is not None:
                best = min(best, len(cuts))
        return best

    def reach(self, ri, pos, k, essential=True):
        """Letters covered by k greedy pieces from pos (inf if the cycle is covered)."""
        covered = 0
        n = self.readings[ri].n
        for _ in range(k):
            L = self.piece_length(ri, pos + covered, essential)
            if L <= 0:
                break
            covered += L
            if covered >= n:
                return inf
        return covered

    def _candidate_starts(self, ri, essential):
        rd = self.readings[ri]
        cands = set()
        for a, (x, na, Sa) in enumerate(zip(rd.letters, rd.lens, rd.starts)):
            offs = {0, 1, 2, na - 1, na - 2}
            for rj, b in self.by_letter.get(x, ()):
                nb = self.readings[rj].lens[b]
                for dlt in (-1, 0, 1):
                    offs.add(na - nb + dlt)
            for o in offs:
                if 0 <= o < na:
                    cands.add((Sa + o) % rd.n)
        return sorted(cands)

    def cyclic_decomposition(self, c: int, essential: bool = True, below: Optional[int] = None):
        """Fewest pieces covering class cycle c, as Decomposition, or None.

        With `below`, the search stops as soon as a cover with fewer pieces is found.
        """
        ri = 2 * c
        rd = self.readings[ri]
        n = rd.n
        # any cover has a cut in [s0, s0 + L(s0)]; pick the window with fewest candidates
        cands = self._candidate_starts(ri, essential)
        for a in range(len(rd.lens)):
            if self.piece_length(ri, rd.starts[a], essential) == 0:
                return None
        window = None
        for a in range(len(rd.lens)):
            s0 = rd.starts[a]
            L0 = self.piece_length(ri, s0, essential)
            inside = [s for s in cands if (s - s0) % n <= L0]
            if window is None or len(inside) < len(window):
                window = inside
        best = None
        for s in window:
            limit = None if best is None else len(best) - 1
            cuts = self.greedy(ri, s, n, essential, limit=limit)
            if cuts is None:
                return None
            if cuts and cuts[-1] is None:
                continue
            if best is None or len(cuts) < len(best):
                best = cuts
                if below is not None and len(best) < below:
                    break
        return Decomposition(len(best), tuple(best), best[0][0] if best else 0)
