"""Cyclic subgroups: the case split for a word w over a labelled graph, the
constants that go with each case, the sigma path, and the distorted C(p)
family with its short words for b^(2^n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .conditions import check_grprime
from .graph import (LabelledGraph, PathSpec, automorphism_group, find_occurrences, path_label,
                    simple_cycles)
from .words import (CyclicWord, Letter, Presentation, RunWord, cyclic_conjugates, inverse,
                    is_cyclically_reduced, is_proper_power)

CASE1, CASE2A, CASE2B = "Case1", "Case2a", "Case2b"


class PreconditionError(ValueError):
    pass


class NotSmallCancellation(ValueError):
    pass


class SigmaAssertion(AssertionError):
    def __init__(self, msg, evidence=None):
        super().__init__(msg)
        self.evidence = evidence


def _word(w) -> tuple:
    rep = w.representative if isinstance(w, CyclicWord) else w
    return tuple(rep)


def _check_word(w):
    if not w:
        raise PreconditionError("w is empty")
    if not is_cyclically_reduced(w):
        raise PreconditionError("w is not cyclically reduced")
    if is_proper_power(w):
        raise PreconditionError("w is a proper power")


@dataclass
class RayScan:
    bounded: bool
    C0: Optional[int]
    path: PathSpec  # longest w-bar path, or a closed one when unbounded
    word: tuple  # the orientation (w or its inverse) that realises it


def _fiber_scan(g: LabelledGraph, u: tuple):
    """Longest path labelled by a factor of u^infinity; None plus a closed walk if unbounded."""
    n = len(u)
    by_letter = g.dart_by_letter
    nodes = [(d, i) for d in range(g.n_darts) for i in range(n) if g.letter(d) == u[i]]

    def succ(node):
        d, i = node
        j = (i + 1) % n
        ds = by_letter[g.head(d)].get(u[j], ())
        return [(ds[0], j)] if ds else []

    # each node has at most one successor, so walk chains
    best = {}
    for root in nodes:
        if root in best:
            continue
        trail, where = [], {}
        node = root
        while node is not None and node not in best:
            if node in where:
                cyc = trail[where[node]:]
                return None, PathSpec.from_darts(g.tail(cyc[0][0]), [d for d, _ in cyc])
            where[node] = len(trail)
            trail.append(node)
            nxs = succ(node)
            node = nxs[0] if nxs else None
        acc = best[node] if node is not None else 0
        for nd in reversed(trail):
            acc += 1
            best[nd] = acc
    if not best:
        return 0, PathSpec(0, ())
    top = max(best, key=lambda nd: (best[nd], -nd[0], -nd[1]))
    darts, node = [], top
    while True:
        darts.append(node[0])
        nxs = succ(node)
        if not nxs:
            break
        node = nxs[0]
    return best[top], PathSpec.from_darts(g.tail(top[0]), darts)


def subword_ray_scan(g: LabelledGraph, w) -> RayScan:
    w = _word(w)
    _check_word(w)
    best = None
    for u in (w, tuple(inverse(w))):
        length, path = _fiber_scan(g, u)
        if length is None:
            return RayScan(False, None, path, u)
        if best is None or length > best.C0:
            best = RayScan(True, length, path, u)
    return best


def detect_period(g: LabelledGraph, p: PathSpec, aut=None) -> bool:
    """Whether some automorphism carries the start of p to its end."""
    from .graph import path_end
    a, b = p.start, path_end(g, p)
    if a == b:
        raise PreconditionError("path is closed")
    aut = aut or automorphism_group(g)
    return aut.vertex_orbit[a] == aut.vertex_orbit[b]


@dataclass
class Overlap:
    cycle: PathSpec
    start: int
    length: int
    word: tuple  # orientation matched


@dataclass
class DistortionCertificate:
    word: tuple
    case: str
    C0: Optional[int] = None
    coefficient: Optional[Fraction] = None
    hausdorff: Optional[int] = None
    evidence: list = field(default_factory=list)
    audits: list = field(default_factory=list)
    finite_order: bool = False
    small_cancellation: bool = True
    downgraded: bool = False
    notes: list = field(default_factory=list)


def cycle_overlap(g: LabelledGraph, cyc: PathSpec, w: tuple) -> Overlap:
    """Longest subpath of a closed path labelled by a factor of w^inf or (w^-1)^inf."""
    lab = path_label(g, cyc)
    m = len(lab)
    best = Overlap(cyc, 0, 0, w)
    for u in (w, tuple(inverse(w))):
        n = len(u)
        seq = lab + lab
        nxt = [0] * n
        for k in range(2 * m - 1, -1, -1):
            cur = [0] * n
            for i in range(n):
                if seq[k] == u[i]:
                    cur[i] = min(m, 1 + nxt[(i + 1) % n])
            if k < m:
                top = max(cur)
                if top > best.length:
                    best = Overlap(cyc, k, top, u)
            nxt = cur
    return best


def audit_inequalities(overlap: int, cycle_len: int, wlen: int) -> dict:
    o, m, n = overlap, Fraction(cycle_len), wlen
    return {
        "overlap_bounds": n < o < n + m / 6,
        "cycle_bounds": 2 * n <= m < 3 * n,
        "overlap_two_thirds": o < 2 * m / 3,
    }


def classify_case(g: LabelledGraph, w, strict: bool = False) -> DistortionCertificate:
    w = _word(w)
    scan = subword_ray_scan(g, w)
    cert = DistortionCertificate(w, CASE1)
    cert.notes.append("minimality of w among roots up to conjugacy is assumed, not checked")
    if not scan.bounded:
        cert.finite_order = True
        cert.evidence.append(scan.path)
        cert.notes.append("a closed path reads a power of a conjugate of w")
        return cert
    sc = check_grprime(g, Fraction(1, 6))
    cert.small_cancellation = sc.passed
    if not sc.passed:
        cert.notes.append("graph is not Gr'(1/6); the case constants are computed anyway")
        if strict:
            raise NotSmallCancellation("graph fails Gr'(1/6)")
    cert.C0 = scan.C0
    cert.evidence.append(scan.path)
    wide = []
    for cyc in simple_cycles(g):
        ov = cycle_overlap(g, cyc, w)
        if 2 * ov.length > len(cyc):
            wide.append(ov)
    cert.hausdorff = 6 * scan.C0 + len(w)
    if wide:
        cert.case = CASE2B
        cert.coefficient = Fraction(1, scan.C0)
        for ov in wide:
            a = audit_inequalities(ov.length, len(ov.cycle), len(w))
            cert.audits.append({"cycle": ov.cycle, "overlap": ov.length, **a})
            cert.evidence.append(ov)
            if not all(a.values()):
                cert.downgraded = True
    else:
        cert.case = CASE2A
        cert.coefficient = Fraction(1, 3)
    return cert


def _extend(g: LabelledGraph, darts: list, u: tuple, phase: int, cap: int) -> tuple:
    """Grow a u-bar path both ways as far as the graph allows; returns (darts, phase of first)."""
    n = len(u)
    darts = list(darts)
    i = (phase + len(darts) - 1) % n
    while len(darts) <= cap:
        ds = g.dart_by_letter[g.head(darts[-1])].get(u[(i + 1) % n], ())
        if not ds:
            break
        darts.append(ds[0])
        i = (i + 1) % n
    first = phase
    while len(darts) <= cap:
        want = u[(first - 1) % n].inv()
        ds = g.dart_by_letter[g.tail(darts[0])].get(want, ())
        if not ds:
            break
        darts.insert(0, ds[0] ^ 1)
        first = (first - 1) % n
    return darts, first


def sigma_path(g: LabelledGraph, w, cert: Optional[DistortionCertificate] = None) -> PathSpec:
    """The maximal u-bar path through a conjugate of w on a wide cycle, checked for
    |w| < |sigma| < 2|w| and for unique automorphic placement of every w-conjugate path."""
    w = _word(w)
    cert = cert or classify_case(g, w)
    if cert.case != CASE2B:
        raise PreconditionError(f"sigma needs Case2b, got {cert.case}")
    ov = next(e for e in cert.evidence if isinstance(e, Overlap))
    u = ov.word
    n = len(u)
    cyc = ov.cycle.darts
    m = len(cyc)
    seed = [cyc[(ov.start + k) % m] for k in range(n)]
    lab = [g.letter(d) for d in seed]
    phase = next(i for i in range(n) if all(lab[k] == u[(i + k) % n] for k in range(n)))
    darts, first = _extend(g, seed, u, phase, cap=(cert.C0 or 0) + 1)
    sigma = PathSpec.from_darts(g.tail(darts[0]), darts)
    if not n < len(darts) < 2 * n:
        raise SigmaAssertion(f"|sigma| = {len(darts)} outside ({n}, {2 * n})", sigma)
    aut = automorphism_group(g)
    orb = aut.dart_orbit
    sig_lab = [g.letter(d) for d in darts]
    for conj in sorted(cyclic_conjugates(CyclicWord(u))):
        for occ in find_occurrences(conj, g):
            hits = [j for j in range(len(darts) - n + 1)
                    if tuple(sig_lab[j:j + n]) == tuple(conj)
                    and orb[darts[j]] == orb[occ.darts[0]]]
            if len(hits) != 1:
                raise SigmaAssertion(f"occurrence {occ} maps to sigma {len(hits)} times",
                                     (sigma, occ, hits))
    return sigma


# ------------------------------------------------------------ the distorted family

def distorted_relator(p: int, n: int) -> RunWord:
    a, b = Letter("a"), Letter("b")
    runs = []
    for k in range(1, p + 1):
        runs += [(a, 1), (b, 2 * n * p + 2 * k - 1)]
    runs += [(a, 1), (b, 2 ** n)]
    return RunWord(runs)


def gen_distorted_family(p: int, N: int) -> Presentation:
    if p < 2 or N < 1:
        raise ValueError("need p >= 2 and N >= 1")
    return Presentation(("a", "b"), [distorted_relator(p, n) for n in range(1, N + 1)],
                        truncation=N)


def short_witness(p: int, n: int) -> tuple:
    """u_n^-1 where r_n is literally u_n b^(2^n); it equals b^(2^n) in the group."""
    r = distorted_relator(p, n)
    u = r.slice(0, len(r) - 2 ** n)
    return tuple(inverse(tuple(u)))


def short_witness_length(p: int, n: int) -> int:
    return (p + 1) + 2 * n * p * p + p * p


def _fresh(name: str, taken: set) -> str:
    k = 2
    while f"{name}_{k}" in taken:
        k += 1
    return f"{name}_{k}"


def combine_free_product(p1: Presentation, p2: Presentation) -> Presentation:
    """Union presentation; generators of p2 that clash with p1 get a numeric suffix."""
    taken = set(p1.alphabet) | set(p2.alphabet)
    rename = {}
    for s in p2.alphabet:
        if s in p1.alphabet:
            new = _fresh(s, taken)
            taken.add(new)
            rename[s] = new
    alpha2 = tuple(rename.get(s, s) for s in p2.alphabet)

    def tr(r):
        if isinstance(r, RunWord):
            return RunWord([(Letter(rename.get(x.symbol, x.symbol), x.sign), k) for x, k in r.runs])
        return tuple(Letter(rename.get(x.symbol, x.symbol), x.sign) for x in r)

    trunc = p1.truncation if p1.truncation is not None else p2.truncation
    return Presentation(p1.alphabet + alpha2, list(p1.relators) + [tr(r) for r in p2.relators],
                        truncation=trunc)
