"""Planar and spherical diagrams as rotation systems.

A dart t has a tail vertex, an opposite dart opp[t] and a label (a Letter,
or None for an edge labelled by the identity). rot[v] lists the darts
leaving v in cyclic order. Faces are the orbits of phi(t) = sigma(opp[t]),
where sigma is the successor in the rotation at the tail. A disk keeps one
dart of its outer face; a sphere has none.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .words import Letter, free_reduce, inverse


class InvalidMap(ValueError):
    pass


class NothingToFold(ValueError):
    pass


class NotFreelyInverse(ValueError):
    pass


class NoLift(ValueError):
    pass


class Diagram:
    def __init__(self, topology: str = "disk"):
        if topology not in ("disk", "sphere"):
            raise InvalidMap(f"unknown topology {topology!r}")
        self.topology = topology
        self.tail = {}
        self.opp = {}
        self.label = {}
        self.rot = {}
        self.outer = None
        self._next_dart = 0
        self._next_vertex = 0

    # ---------------------------------------------------------- construction

    def add_vertex(self) -> int:
        v = self._next_vertex
        self._next_vertex += 1
        self.rot[v] = []
        return v

    def new_edge(self, u: int, v: int, lab: Optional[Letter]):
        """Two darts u -> v and v -> u, not yet placed in the rotations."""
        a, b = self._next_dart, self._next_dart + 1
        self._next_dart += 2
        self.tail[a], self.tail[b] = u, v
        self.opp[a], self.opp[b] = b, a
        self.label[a] = lab
        self.label[b] = lab.inv() if lab is not None else None
        return a, b

    def copy(self) -> "Diagram":
        d = Diagram(self.topology)
        d.tail, d.opp, d.label = dict(self.tail), dict(self.opp), dict(self.label)
        d.rot = {v: list(r) for v, r in self.rot.items()}
        d.outer = self.outer
        d._next_dart, d._next_vertex = self._next_dart, self._next_vertex
        return d

    # ---------------------------------------------------------- navigation

    def head(self, t: int) -> int:
        return self.tail[self.opp[t]]

    def sigma(self, t: int) -> int:
        r = self.rot[self.tail[t]]
        return r[(r.index(t) + 1) % len(r)]

    def sigma_inv(self, t: int) -> int:
        r = self.rot[self.tail[t]]
        return r[r.index(t) - 1]

    def phi(self, t: int) -> int:
        return self.sigma(self.opp[t])

    def face_of(self, t: int) -> list:
        out = [t]
        s = self.phi(t)
        while s != t:
            out.append(s)
            s = self.phi(s)
        return out

    def faces(self) -> list:
        seen, out = set(), []
        for t in sorted(self.tail):
            if t not in seen:
                f = self.face_of(t)
                seen.update(f)
                out.append(f)
        return out

    def outer_face(self) -> list:
        return self.face_of(self.outer) if self.outer is not None else []

    def inner_faces(self) -> list:
        o = set(self.outer_face())
        return [f for f in self.faces() if not (o and f[0] in o)]

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    @property
    def n_vertices(self):
        return len(self.rot)

    @property
    def n_edges(self):
        return len(self.tail) // 2

    def word(self, darts) -> tuple:
        return tuple(self.label[t] for t in darts if self.label[t] is not None)

    def face_word(self, t: int) -> tuple:
        return self.word(self.face_of(t))

    def boundary_word(self) -> tuple:
        return self.word(self.outer_face())

    def euler(self) -> int:
        f = len(self.faces())
        if not self.tail:
            f = 1  # a lone vertex still bounds one face
        return self.n_vertices - self.n_edges + f

    def validate(self):
        for t, u in self.tail.items():
            if self.opp[self.opp[t]] != t or self.opp[t] == t:
                raise InvalidMap(f"opposite of dart {t} is not an involution")
            if t not in self.rot.get(u, ()):
                raise InvalidMap(f"dart {t} missing from rotation at {u}")
            lab, back = self.label[t], self.label[self.opp[t]]
            if (lab is None) != (back is None) or (lab is not None and back != lab.inv()):
                raise InvalidMap(f"labels of dart {t} and its opposite are not inverse")
        listed = [t for r in self.rot.values() for t in r]
        if len(listed) != len(set(listed)) or set(listed) != set(self.tail):
            raise InvalidMap("rotations do not list each dart once")
        if not self._connected():
            raise InvalidMap("diagram is not connected")
        if self.euler() != 2:
            raise InvalidMap(f"Euler characteristic {self.euler()} of the closed surface is not 2")
        if self.topology == "disk" and self.tail and self.outer not in self.tail:
            raise InvalidMap("disk without an outer face")
        if self.topology == "sphere" and self.outer is not None:
            raise InvalidMap("sphere with an outer face")
        return True

    def _connected(self) -> bool:
        if not self.rot:
            return True
        start = next(iter(self.rot))
        seen, stack = {start}, [start]
        while stack:
            v = stack.pop()
            for t in self.rot[v]:
                w = self.head(t)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.rot)

    # ---------------------------------------------------------- surgery helpers

    def _remove_edge(self, t: int):
        for s in (t, self.opp[t]):
            self.rot[self.tail[s]].remove(s)
        for s in (t, self.opp[t]):
            del self.tail[s], self.opp[s], self.label[s]

    def _insert_after(self, anchor: int, t: int):
        r = self.rot[self.tail[anchor]]
        r.insert(r.index(anchor) + 1, t)

    def _keep_outer(self, old_outer: list):
        if self.topology != "disk":
            return
        self.outer = next((t for t in old_outer if t in self.tail), None)
        if self.outer is None and self.tail:
            raise InvalidMap("lost track of the outer face")

    def _between(self, v: int, a: int, b: int) -> list:
        """Darts strictly after a and before b in the rotation at v."""
        r = self.rot[v]
        i, out = r.index(a), []
        while True:
            i = (i + 1) % len(r)
            if r[i] == b:
                return out
            out.append(r[i])

    def _region(self, seeds: list, fence: set) -> tuple:
        """Edges and vertices reachable from seed darts without passing fence vertices."""
        darts, verts = set(), set()
        stack = list(seeds)
        while stack:
            t = stack.pop()
            if t in darts:
                continue
            darts.update((t, self.opp[t]))
            w = self.head(t)
            if w not in fence and w not in verts:
                verts.add(w)
                stack.extend(self.rot[w])
        return darts, verts

    def _discard(self, darts: set, verts: set):
        for v in verts:
            del self.rot[v]
        for t in darts:
            u = self.tail[t]
            if u in self.rot and t in self.rot[u]:
                self.rot[u].remove(t)
        for t in darts:
            del self.tail[t], self.opp[t], self.label[t]

    def _mirror(self):
        """Reverse every rotation; faces become the opposite darts of the old faces."""
        for r in self.rot.values():
            r.reverse()
        if self.outer is not None:
            self.outer = self.opp[self.outer]

    def _outer_set(self) -> set:
        return set(self.outer_face()) if self.outer is not None else set()

    # ---------------------------------------------------------- elementary moves

    def fold_at(self, d1: int):
        """Fold d1 with the next dart of its face; their labels must be inverse."""
        d2 = self.phi(d1)
        lab1, lab2 = self.label[d1], self.label[d2]
        if lab1 is None or lab2 is None or lab2 != lab1.inv() or d2 == d1:
            raise NothingToFold("darts are not an inverse pair")
        old_outer = self.outer_face()
        a1, a2 = self.opp[d1], self.opp[d2]
        u, v, w = self.tail[d1], self.tail[d2], self.head(d2)
        if d2 == a1:
            # spur: v has degree 1
            self._remove_edge(d1)
            del self.rot[v]
            self._keep_outer([t for t in old_outer if t not in (d1, a1)])
            return
        if v == w and u != v:
            # e2 is a loop: fold the mirror image, where e1 is the loop instead
            self._mirror()
            try:
                self.fold_at(a2)
            finally:
                self._mirror()
            return
        if u == v == w:
            self._fold_loops(d1, d2, old_outer)
            return
        if u != w:
            # glue e2 onto e1: w merges into u
            rw = self.rot.pop(w)
            k = rw.index(a2)
            seq = rw[k + 1:] + rw[:k]
            ru = self.rot[u]
            i = ru.index(d1)
            self.rot[u] = ru[:i] + seq + ru[i:]
            for t in seq:
                self.tail[t] = u
            self.rot[v].remove(d2)
            for t in (d2, a2):
                del self.tail[t], self.opp[t], self.label[t]
            self._keep_outer([d1 if t == a2 else t for t in old_outer if t not in (d1, d2)])
            return
        # pinched: e1 e2 is a closed curve; drop the side away from the outer face
        face_side = self._between(u, a2, d1) + self._between(v, a1, d2)
        far_side = self._between(u, d1, a2) + self._between(v, d2, a1)
        fd, fv = self._region(face_side, {u, v})
        rd, rv = self._region(far_side, {u, v})
        outer = self._outer_set()
        outer_far = bool(outer & (rd | {a1, a2})) and not (outer & {d1, d2})
        if self.outer is None:
            outer_far = True  # on a sphere keep the side away from the folding face
        if outer_far:
            self._discard(fd, fv)
        else:
            self._discard(rd, rv)
        self.rot[v].remove(d2)
        self.rot[u].remove(a2)
        for t in (d2, a2):
            del self.tail[t], self.opp[t], self.label[t]
        self._keep_outer([d1 if t == a2 else t for t in old_outer if t not in (d1, d2)])
        if not outer_far and self.rot[v] == [a1]:
            # e1 is now a spur inside the folding face
            self._remove_edge(d1)
            del self.rot[v]
            self._keep_outer([t for t in old_outer if t in self.tail])

    def _fold_loops(self, d1: int, d2: int, old_outer: list):
        """Fold two inverse loops at one vertex. Around u the darts read
        a1 d2 X a2 Y d1 Z; loop e2 encloses X, loop e1 encloses Z and the
        folding face lies between them with Y."""
        a1, a2 = self.opp[d1], self.opp[d2]
        u = self.tail[d1]
        X, Y, Z = self._between(u, d2, a2), self._between(u, a2, d1), self._between(u, d1, a1)
        yd, yv = self._region(Y, {u})
        outer = self._outer_set()
        if outer & (yd | {d1, d2}):
            # the two loop discs close up into a sphere: drop them with both loops
            for side in (X, Z):
                self._discard(*self._region(side, {u}))
            self.rot[u] = list(Y)
            for t in (d1, a1, d2, a2):
                del self.tail[t], self.opp[t], self.label[t]
            if not self.rot[u] and len(self.rot) > 1:
                del self.rot[u]
            self._keep_outer([t for t in old_outer if t in self.tail])
            return
        # glue the discs along one loop and drop the pinched-off side
        self._discard(yd, yv)
        self.rot[u] = [a1] + X + [d1] + Z
        for t in (d2, a2):
            del self.tail[t], self.opp[t], self.label[t]
        self._keep_outer([d1 if t == a2 else t for t in old_outer if t not in (d1, d2)])

    def contract_edge(self, t: int):
        """Contract an identity-labelled edge joining two distinct vertices."""
        if self.label[t] is not None:
            raise InvalidMap("only identity-labelled edges are contracted")
        a = self.opp[t]
        u, v = self.tail[t], self.tail[a]
        if u == v:
            raise InvalidMap("edge is a loop")
        old_outer = self.outer_face()
        rv = self.rot.pop(v)
        k = rv.index(a)
        seq = rv[k + 1:] + rv[:k]
        ru = self.rot[u]
        i = ru.index(t)
        self.rot[u] = ru[:i] + seq + ru[i + 1:]
        for s in seq:
            self.tail[s] = u
        for s in (t, a):
            del self.tail[s], self.opp[s], self.label[s]
        self._keep_outer([s for s in old_outer if s in self.tail])

    def remove_loop(self, t: int):
        """Remove an identity-labelled loop and whatever it encloses."""
        if self.label[t] is not None:
            raise InvalidMap("only identity-labelled loops are removed")
        a = self.opp[t]
        u = self.tail[t]
        if self.tail[a] != u:
            raise InvalidMap("edge is not a loop")
        old_outer = self.outer_face()
        side1, side2 = self._between(u, t, a), self._between(u, a, t)
        d1, v1 = self._region(side1, {u})
        d2, v2 = self._region(side2, {u})
        outer = self._outer_set()
        drop = (d2, v2) if (outer & d1 or (outer and self.face_of(t)[0] in outer and not outer & d2)) \
            else (d1, v1)
        if not outer:
            drop = (d1, v1) if len(d1) <= len(d2) else (d2, v2)
        self._discard(*drop)
        self._remove_edge(t)
        self._keep_outer([s for s in old_outer if s in self.tail])

    def eliminate_zero_edges(self):
        while True:
            zero = sorted(t for t, lab in self.label.items() if lab is None)
            if not zero:
                return
            t = zero[0]
            if self.tail[t] == self.head(t):
                self.remove_loop(t)
            else:
                self.contract_edge(t)

    def blow_up(self, t1: int, t2: int) -> int:
        """Split the common tail of t1, t2 by an identity edge whose sides are
        the faces leaving through t1 and t2. Returns the dart of the new edge
        on the t2 face."""
        v = self.tail[t1]
        if self.tail[t2] != v or t1 == t2:
            raise InvalidMap("darts must be distinct and share their tail")
        r = self.rot[v]
        i1, i2 = r.index(t1), r.index(t2)
        n = len(r)
        arc1 = [r[(i1 + k) % n] for k in range((i2 - i1) % n)]
        arc2 = [r[(i2 + k) % n] for k in range((i1 - i2) % n)]
        v2 = self.add_vertex()
        zp, zm = self.new_edge(v, v2, None)
        self.rot[v] = arc1 + [zp]
        self.rot[v2] = arc2 + [zm]
        for s in arc2:
            self.tail[s] = v2
        return zp

    def add_chord(self, ta: int, tb: int, labels) -> list:
        """A new path inside the face of ta and tb, from the corner before ta to
        the corner before tb. Returns its darts."""
        if tb not in self.face_of(ta):
            raise InvalidMap("chord ends are not on one face")
        if not labels:
            raise InvalidMap("chord needs at least one edge")
        u, v = self.tail[ta], self.tail[tb]
        pts = [u] + [self.add_vertex() for _ in labels[:-1]] + [v]
        darts = []
        for k, lab in enumerate(labels):
            darts.append(self.new_edge(pts[k], pts[k + 1], lab))
        for k in range(1, len(labels)):
            self.rot[pts[k]] = [darts[k - 1][1], darts[k][0]]
        ru = self.rot[u]
        ru.insert(ru.index(ta), darts[0][0])
        rv = self.rot[v]
        rv.insert(rv.index(tb), darts[-1][1])
        return [x for x, _ in darts]

    def subdivide_face(self, t: int) -> int:
        """Cone a face off to a new vertex; returns the new vertex."""
        f = self.face_of(t)
        x = self.add_vertex()
        spokes = []
        for ti in f:
            y, yb = self.new_edge(self.tail[ti], x, None)
            spokes.append((ti, y, yb))
        for ti, y, _ in spokes:
            r = self.rot[self.tail[ti]]
            r.insert(r.index(ti), y)
        self.rot[x] = [yb for _, _, yb in reversed(spokes)]
        return x


# ------------------------------------------------------------ builders

def from_faces(faces, labels=None, topology="sphere", outer_face=None) -> Diagram:
    """Build from vertex cycles, each directed edge used by exactly one face.

    labels maps a directed pair (a, b) to a Letter (the reverse pair gets
    the inverse); missing pairs are labelled by the identity.
    """
    d = Diagram(topology)
    verts = sorted({v for f in faces for v in f})
    vid = {v: d.add_vertex() for v in verts}
    dart, used = {}, set()
    for f in faces:
        for k in range(len(f)):
            a, b = f[k], f[(k + 1) % len(f)]
            if (a, b) in used:
                raise InvalidMap(f"directed edge {a}->{b} used twice")
            used.add((a, b))
            if (b, a) in dart:
                continue
            lab = None
            if labels is not None:
                if (a, b) in labels:
                    lab = labels[(a, b)]
                elif (b, a) in labels:
                    lab = labels[(b, a)].inv()
            x, y = d.new_edge(vid[a], vid[b], lab)
            dart[(a, b)], dart[(b, a)] = x, y
    nxt = {}
    for f in faces:
        for k in range(len(f)):
            a, b, c = f[k], f[(k + 1) % len(f)], f[(k + 2) % len(f)]
            nxt[dart[(a, b)]] = dart[(b, c)]
    # sigma(opp t) = phi(t)
    succ = {}
    for t, s in nxt.items():
        succ[d.opp[t]] = s
    if set(succ) != set(d.tail):
        raise InvalidMap("faces do not close up into a surface")
    for v in d.rot:
        start = next((t for t in sorted(d.tail) if d.tail[t] == v), None)
        if start is None:
            continue
        cyc, t = [start], succ[start]
        while t != start:
            cyc.append(t)
            t = succ[t]
        d.rot[v] = cyc
    if topology == "disk":
        f = faces[outer_face if outer_face is not None else 0]
        d.outer = dart[(f[0], f[1])]
    d.validate()
    return d


def tetrahedron() -> Diagram:
    return from_faces([[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])


def cube() -> Diagram:
    return from_faces([[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [1, 2, 6, 5],
                       [2, 3, 7, 6], [3, 0, 4, 7]])


ICOSAHEDRON = [[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11], [1, 5, 9], [5, 11, 4],
               [11, 10, 2], [10, 7, 6], [7, 1, 8], [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8],
               [3, 8, 9], [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]]


def icosahedron() -> Diagram:
    return from_faces(ICOSAHEDRON)


def dual(d: Diagram) -> Diagram:
    """Faces become vertices; the rotation at a new vertex is its face cycle."""
    out = Diagram("sphere")
    faces = d.faces()
    for _ in faces:
        out.add_vertex()
    fid = {t: k for k, f in enumerate(faces) for t in f}
    out._next_dart = d._next_dart
    for t in d.tail:
        out.tail[t] = fid[t]
        out.opp[t] = d.opp[t]
        out.label[t] = d.label[t]
    for k, f in enumerate(faces):
        out.rot[k] = list(f)
    out.validate()
    return out


def dodecahedron() -> Diagram:
    return dual(icosahedron())


def polygon(w, topology="disk") -> Diagram:
    """A single face bounded by w; the outer face reads w backwards."""
    n = len(w)
    labels = {(k, (k + 1) % n): w[k] for k in range(n)}
    if n == 1:
        raise InvalidMap("a one-letter polygon needs a loop")
    return from_faces([list(range(n)), list(reversed(range(n)))], labels, topology="disk",
                      outer_face=1)


def random_sphere(subdivisions: int, rng: random.Random) -> Diagram:
    d = tetrahedron()
    for _ in range(subdivisions):
        faces = d.faces()
        d.subdivide_face(rng.choice(faces)[0])
    return d


def random_letter(rng, alphabet=("a", "b", "c")) -> Letter:
    return Letter(rng.choice(alphabet), rng.choice((1, -1)))


def random_disk(subdivisions: int, rng: random.Random, alphabet=("a", "b", "c")) -> Diagram:
    """A triangulated disk: random sphere with one face declared outer, random labels."""
    d = random_sphere(subdivisions, rng)
    for t in sorted(d.tail):
        if t < d.opp[t]:
            x = random_letter(rng, alphabet)
            d.label[t], d.label[d.opp[t]] = x, x.inv()
    d.topology = "disk"
    d.outer = rng.choice(d.faces())[0]
    d.validate()
    return d


# ------------------------------------------------------------ audits and moves

def curvature_audit(d: Diagram) -> Fraction:
    """sum over vertices of (3 - deg v) plus half the sum over faces of (6 - deg f)."""
    if d.topology != "sphere":
        raise InvalidMap("curvature audit needs a sphere")
    d.validate()
    total = Fraction(0)
    for v in d.rot:
        total += 3 - d.degree(v)
    for f in d.faces():
        total += Fraction(6 - len(f), 2)
    return total


def cap_off(d: Diagram) -> Diagram:
    """Treat a disk's outer face as an ordinary face, giving a sphere."""
    s = d.copy()
    s.topology = "sphere"
    s.outer = None
    s.validate()
    return s


def _inverse_pair(d: Diagram, face: list):
    for t in face:
        s = d.phi(t)
        if s != t and d.label[t] is not None and d.label[s] is not None \
                and d.label[s] == d.label[t].inv():
            return t
    return None


def fold_boundary(d: Diagram) -> Diagram:
    """One fold of adjacent inverse boundary edges; the boundary loses two letters."""
    if d.topology != "disk":
        raise InvalidMap("folding needs a disk")
    t = _inverse_pair(d, d.outer_face())
    if t is None:
        raise NothingToFold("boundary word is cyclically reduced")
    out = d.copy()
    out.fold_at(t)
    out.validate()
    return out


def fold_until_reduced(d: Diagram, limit: int = 100_000) -> Diagram:
    for _ in range(limit):
        try:
            d = fold_boundary(d)
        except NothingToFold:
            return d
    raise RuntimeError("folding did not terminate")


def _corner_words(d: Diagram, f: list):
    """(dart, word read from its tail) for every corner of a face."""
    f = list(f)
    return [(f[k], d.word(f[k:] + f[:k])) for k in range(len(f))]


def _freely_trivial(w) -> bool:
    return len(free_reduce(w)) == 0


def cancel_inverse_faces(d: Diagram, t1: int, t2: int) -> Diagram:
    """Remove the faces through darts t1 and t2, whose labels read from a
    shared vertex multiply to a freely trivial word. The boundary word of the
    diagram is unchanged."""
    out = d.copy()
    outer = out._outer_set()
    f1, f2 = out.face_of(t1), out.face_of(t2)
    if outer & (set(f1) | set(f2)):
        raise NotFreelyInverse("the outer face cannot be cancelled")
    before = out.boundary_word()
    if set(f1) == set(f2):
        if not _freely_trivial(out.face_word(t1)):
            raise NotFreelyInverse("face label is not freely trivial")
        anchor = t1
    else:
        pick = None
        for a, wa in _corner_words(out, f1):
            for b, wb in _corner_words(out, f2):
                if out.tail[a] == out.tail[b] and _freely_trivial(wa + wb):
                    pick = (a, b)
                    break
            if pick:
                break
        if pick is None:
            raise NotFreelyInverse("no shared vertex reads a freely trivial product")
        a, b = pick
        z = out.blow_up(a, b)
        anchor = out.phi(z)
        if anchor == out.opp[z]:
            anchor = out.phi(anchor)
        out._remove_edge(z)
    _zip_face(out, anchor)
    out.eliminate_zero_edges()
    out.validate()
    if out.boundary_word() != before and d.topology == "disk":
        raise AssertionError("cancellation changed the boundary word")
    return out


def _zip_face(d: Diagram, anchor: int):
    """Fold a freely trivial face shut."""
    track = [anchor]
    for _ in range(4 * len(d.tail) + 4):
        live = [t for t in track if t in d.tail]
        if not live:
            return
        face = d.face_of(live[0])
        if d.outer is not None and d.outer in face:
            return
        if not d.word(face):
            return  # only identity edges remain; cleanup contracts them
        t = _inverse_pair(d, face)
        if t is None:
            raise NotFreelyInverse("face does not fold shut")
        keep = [s for s in face if s not in (t, d.phi(t))]
        d.fold_at(t)
        track = keep
    raise RuntimeError("zipping did not terminate")


def wedge(d: Diagram, t: int, sub: Diagram, s: int) -> tuple:
    """Glue sub into the corner of d at the tail of t, identifying the tail of s
    with it. Returns the dart maps (old d darts keep ids; sub darts are shifted)."""
    out = d.copy()
    vshift = out._next_vertex
    dshift = out._next_dart
    for v, r in sub.rot.items():
        out.rot[v + vshift] = [x + dshift for x in r]
    for x in sub.tail:
        out.tail[x + dshift] = sub.tail[x] + vshift
        out.opp[x + dshift] = sub.opp[x] + dshift
        out.label[x + dshift] = sub.label[x]
    out._next_vertex += sub._next_vertex
    out._next_dart += sub._next_dart
    v = out.tail[t]
    w = sub.tail[s] + vshift
    rw = out.rot.pop(w)
    k = rw.index(s + dshift)
    seq = rw[k:] + rw[:k]
    for x in seq:
        out.tail[x] = v
    r = out.rot[v]
    i = r.index(t)
    out.rot[v] = r[:i] + seq + r[i:]
    return out, dshift


def replace_face(d: Diagram, t: int, sub: Diagram) -> Diagram:
    """Replace the face through t by a disk whose boundary word reads the face label."""
    fw = d.face_word(t)
    ob = sub.outer_face()
    base = None
    for k in range(len(ob)):
        if tuple(inverse(sub.word(ob[k:] + ob[:k]))) == fw:
            base = ob[k]
            break
    if base is None or sub.topology != "disk":
        raise NotFreelyInverse("replacement boundary does not match the face")
    out, shift = wedge(d, t, sub, base)
    out.outer = d.outer
    return cancel_inverse_faces(out, t, base + shift)


# ------------------------------------------------------------ degrees and shapes

def arcs_of_face(d: Diagram, t: int) -> list:
    """Split a face boundary at vertices of degree other than 2."""
    f = d.face_of(t)
    cut = [k for k, s in enumerate(f) if d.degree(d.tail[s]) != 2]
    if not cut:
        return [f]
    out = []
    for j, k in enumerate(cut):
        nxt = cut[(j + 1) % len(cut)]
        seg = f[k:nxt] if nxt > k else f[k:] + f[:nxt]
        out.append(seg)
    return out


def degrees(d: Diagram, t: int) -> tuple:
    """(exterior degree, interior degree) of the face through t."""
    outer = d._outer_set()
    e = i = 0
    for seg in arcs_of_face(d, t):
        if d.opp[seg[0]] in outer:
            e += 1
        else:
            i += 1
    return e, i


def is_interior_face(d: Diagram, t: int) -> bool:
    outer = d._outer_set()
    return not any(d.opp[s] in outer for s in d.face_of(t))


def is_37_diagram(d: Diagram):
    """(verdict, first violating face dart)."""
    for f in d.inner_faces():
        if is_interior_face(d, f[0]) and degrees(d, f[0])[1] < 7:
            return False, f[0]
    return True, None


def face_adjacency(d: Diagram) -> dict:
    faces = d.inner_faces()
    fid = {t: k for k, f in enumerate(faces) for t in f}
    adj = {k: set() for k in range(len(faces))}
    for k, f in enumerate(faces):
        for t in f:
            o = d.opp[t]
            if o in fid and fid[o] != k:
                adj[k].add(fid[o])
    return adj


def shape_i1(d: Diagram) -> bool:
    faces = d.inner_faces()
    if len(faces) == 1:
        return True
    if not faces:
        return False
    degs = [degrees(d, f[0]) for f in faces]
    adj = face_adjacency(d)
    ends = [k for k, dg in enumerate(degs) if dg == (1, 1)]
    if len(ends) != 2:
        return False
    for k, dg in enumerate(degs):
        if k in ends:
            if len(adj[k]) != 1:
                return False
        elif dg != (2, 2) or len(adj[k]) != 2:
            return False
    # the adjacency graph must be one path through all faces
    seen, prev, cur = {ends[0]}, None, ends[0]
    while True:
        nxt = [x for x in adj[cur] if x != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        if cur in seen:
            return False
        seen.add(cur)
    return len(seen) == len(faces)


# ------------------------------------------------------------ diagrams over graphs

def _face_lifts(g, word):
    from .graph import find_occurrences, path_vertices
    out = []
    for occ in find_occurrences(word, g):
        vs = path_vertices(g, occ)
        if vs[0] == vs[-1] and len(set(vs[:-1])) == len(vs) - 1:
            out.append(occ)
    return out


def validate_over_graph(d: Diagram, target, essential: bool = True):
    """Check every face lifts to a simple closed path and that no interior edge
    essentially originates from the graph. For a completion, interior arcs
    must also lift to locally geodesic paths. Returns (verdict, witness)."""
    from .graph import LabelledGraph, automorphism_group, PathSpec
    completion = None
    g = target
    if not isinstance(target, LabelledGraph):
        completion, g = target, target.graph
    aut = automorphism_group(g)
    orbit = aut.dart_orbit
    lifts = {}
    for f in d.inner_faces():
        if any(d.label[t] is None for t in f):
            raise NoLift("identity edges must be eliminated first")
        ls = _face_lifts(g, d.word(f))
        if not ls:
            raise NoLift(f"face through dart {f[0]} has no lift")
        lifts[f[0]] = (f, ls)
    where = {}
    for key, (f, ls) in lifts.items():
        for k, t in enumerate(f):
            where[t] = (key, k)
    for t in sorted(where):
        o = d.opp[t]
        if o not in where or t > o:
            continue
        (k1, i1), (k2, i2) = where[t], where[o]
        f1, l1 = lifts[k1]
        f2, l2 = lifts[k2]
        for p in l1:
            for q in l2:
                a = p.darts[i1]
                b = q.darts[i2] ^ 1
                same = orbit[a] == orbit[b] if essential else a == b
                if same:
                    return False, {"edge": t, "lift": a}
    if completion is not None:
        from .completion import locally_geodesic
        for key, (f, ls) in lifts.items():
            for seg in arcs_of_face(d, f[0]):
                if d.opp[seg[0]] not in where:
                    continue
                k0 = f.index(seg[0])
                for p in ls:
                    darts = [p.darts[(k0 + j) % len(f)] for j in range(len(seg))]
                    path = PathSpec.from_darts(g.tail(darts[0]), darts)
                    if not locally_geodesic(completion, path):
                        return False, {"arc": seg, "lift": path}
    return True, None
