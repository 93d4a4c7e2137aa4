"""Words over a signed alphabet, reductions and presentation-level clean-up.

Words are plain tuples of Letter. Very long relators (blocks like b^(2^30))
use RunWord, a run-length encoded word that behaves as a read-only
sequence of letters; the presentation-level functions work on runs so they
never expand it.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import accumulate
from typing import Iterable, NamedTuple, Optional, Sequence


class EmptyAfterReduction(ValueError):
    pass


class Letter(NamedTuple):
    symbol: str
    sign: int = 1

    def inv(self) -> "Letter":
        return Letter(self.symbol, -self.sign)

    def __str__(self):
        return self.symbol if self.sign == 1 else self.symbol + "^-1"


Word = tuple  # tuple[Letter, ...]


def word(*items) -> Word:
    """Build a word from symbols, (symbol, sign) pairs or Letters.

    >>> word("a", ("b", -1))
    (Letter(symbol='a', sign=1), Letter(symbol='b', sign=-1))
    """
    out = []
    for it in items:
        if isinstance(it, str):
            out.append(Letter(it, 1))
        else:
            out.append(Letter(it[0], it[1]))
    return tuple(out)


def power(symbol: str, k: int) -> Word:
    sign = 1 if k >= 0 else -1
    return (Letter(symbol, sign),) * abs(k)


class RunWord(Sequence):
    """Run-length encoded word; runs are merged so neighbours differ."""

    __slots__ = ("runs", "_ends")

    def __init__(self, runs: Iterable[tuple]):
        merged = []
        for x, k in runs:
            x = Letter(*x)
            if k < 0:
                raise ValueError("negative run length")
            if k == 0:
                continue
            if merged and merged[-1][0] == x:
                merged[-1][1] += k
            else:
                merged.append([x, k])
        self.runs = tuple((x, k) for x, k in merged)
        self._ends = tuple(accumulate(k for _, k in self.runs))

    @classmethod
    def of(cls, w: Sequence[Letter]) -> "RunWord":
        return w if isinstance(w, RunWord) else cls((x, 1) for x in w)

    def __len__(self):
        return self._ends[-1] if self._ends else 0

    def run_index(self, i: int) -> tuple[int, int]:
        """Run containing position i and the offset inside it."""
        j = bisect_right(self._ends, i)
        start = self._ends[j - 1] if j else 0
        return j, i - start

    def run_start(self, j: int) -> int:
        return self._ends[j - 1] if j else 0

    def __getitem__(self, i):
        if isinstance(i, slice):
            start, stop, step = i.indices(len(self))
            if step != 1:
                return tuple(self)[i]
            return self.slice(start, stop)
        n = len(self)
        if i < 0:
            i += n
        if not 0 <= i < n:
            raise IndexError(i)
        return self.runs[self.run_index(i)[0]][0]

    def slice(self, start: int, stop: int) -> "RunWord":
        if stop <= start:
            return RunWord(())
        j0, o0 = self.run_index(start)
        j1, o1 = self.run_index(stop - 1)
        if j0 == j1:
            return RunWord([(self.runs[j0][0], stop - start)])
        out = [(self.runs[j0][0], self.runs[j0][1] - o0)]
        out.extend(self.runs[j0 + 1:j1])
        out.append((self.runs[j1][0], o1 + 1))
        return RunWord(out)

    def __iter__(self):
        for x, k in self.runs:
            for _ in range(k):
                yield x

    def __add__(self, other):
        return RunWord(self.runs + RunWord.of(other).runs)

    def __radd__(self, other):
        return RunWord(RunWord.of(other).runs + self.runs)

    def __mul__(self, k: int):
        return RunWord(self.runs * k)

    def __eq__(self, other):
        if isinstance(other, RunWord):
            return self.runs == other.runs
        if isinstance(other, tuple):
            return len(other) == len(self) and self.runs == RunWord.of(other).runs
        return NotImplemented

    def __hash__(self):
        return hash(("RunWord", self.runs))

    def expand(self) -> Word:
        return tuple(self)

    def __repr__(self):
        return "RunWord(%s)" % " ".join(
            f"{x.symbol}^{x.sign * k}" for x, k in self.runs)


def runs_of(w: Sequence[Letter]) -> tuple:
    return RunWord.of(w).runs


def _same_kind(template, runs):
    rw = RunWord(runs)
    return rw if isinstance(template, RunWord) else rw.expand()


def inverse(w: Sequence[Letter]):
    if isinstance(w, RunWord):
        return RunWord((x.inv(), k) for x, k in reversed(w.runs))
    return tuple(x.inv() for x in reversed(w))


def free_reduce(w: Iterable[Letter]):
    if isinstance(w, RunWord):
        stack = []
        for x, k in w.runs:
            while k and stack and stack[-1][0] == x.inv():
                c = min(k, stack[-1][1])
                k -= c
                stack[-1][1] -= c
                if stack[-1][1] == 0:
                    stack.pop()
            if k:
                if stack and stack[-1][0] == x:
                    stack[-1][1] += k
                else:
                    stack.append([x, k])
        return RunWord((x, k) for x, k in stack)
    stack = []
    for x in w:
        if stack and stack[-1].symbol == x.symbol and stack[-1].sign == -x.sign:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_freely_reduced(w: Sequence[Letter]) -> bool:
    r = runs_of(w)
    return all(r[i][0] != r[i + 1][0].inv() for i in range(len(r) - 1))


def is_cyclically_reduced(w: Sequence[Letter]) -> bool:
    if not is_freely_reduced(w):
        return False
    return len(w) < 2 or w[0] != w[-1].inv()


def concat(*ws):
    """Concatenate words, staying run-length encoded if any part is."""
    if any(isinstance(w, RunWord) for w in ws):
        runs = []
        for w in ws:
            runs.extend(runs_of(w))
        return RunWord(runs)
    out = ()
    for w in ws:
        out += tuple(w)
    return out


def rotate(w: Sequence[Letter], k: int):
    n = len(w)
    if n == 0:
        return w
    k %= n
    return concat(w[k:], w[:k])


@dataclass(frozen=True)
class CyclicWord:
    representative: Sequence

    def __post_init__(self):
        rep = self.representative
        if not isinstance(rep, RunWord):
            rep = tuple(Letter(*x) for x in rep)
        if len(rep) == 0:
            raise EmptyAfterReduction("cyclic word must be nonempty")
        if not is_cyclically_reduced(rep):
            raise ValueError("representative is not cyclically reduced")
        object.__setattr__(self, "representative", rep)

    def __len__(self):
        return len(self.representative)

    def rotations(self) -> list:
        w = self.representative
        return [rotate(w, i) for i in range(len(w))]

    def inverse(self) -> "CyclicWord":
        return CyclicWord(inverse(self.representative))


def cyclic_reduce(w: Sequence[Letter]) -> tuple[CyclicWord, Word]:
    """Split w as conjugator * core * conjugator^-1 with a cyclically reduced core."""
    r = free_reduce(w)
    if len(r) == 0:
        raise EmptyAfterReduction("word is trivial in the free group")
    if isinstance(r, RunWord):
        runs = [list(x) for x in r.runs]
        conj = []
        while len(runs) > 1 and runs[0][0] == runs[-1][0].inv():
            c = min(runs[0][1], runs[-1][1])
            conj.append((runs[0][0], c))
            runs[0][1] -= c
            runs[-1][1] -= c
            if runs[-1][1] == 0:
                runs.pop()
            if runs[0][1] == 0:
                runs.pop(0)
        return CyclicWord(RunWord(runs)), RunWord(conj)
    i, j = 0, len(r) - 1
    while i < j and r[i] == r[j].inv():
        i += 1
        j -= 1
    return CyclicWord(r[i:j + 1]), r[:i]


def cyclic_conjugates(w: CyclicWord) -> set:
    return set(w.rotations())


def symmetrized_closure(relators: Iterable[Sequence[Letter]]) -> set[CyclicWord]:
    """All cyclic conjugates of the cyclically reduced relators and their inverses.

    The result has up to 2|r| elements per relator, so this is meant for
    relators of moderate length.
    """
    out = set()
    for r in relators:
        core, _ = cyclic_reduce(r)
        for rot in core.rotations():
            out.add(CyclicWord(rot))
            out.add(CyclicWord(inverse(rot)))
    return out


def _cyclic_runs(w: Sequence[Letter]) -> tuple[tuple, int]:
    """Runs of w read cyclically, and the offset of position 0 in the first run."""
    r = list(runs_of(w))
    if len(r) > 1 and r[0][0] == r[-1][0]:
        x, k = r.pop()
        r[0] = (x, r[0][1] + k)
        return tuple(r), k
    return tuple(r), 0


def is_proper_power(w) -> Optional[tuple[Sequence, int]]:
    """Smallest-period root and exponent k >= 2, or None."""
    s = w.representative if isinstance(w, CyclicWord) else w
    n = len(s)
    if n < 2:
        return None
    if not isinstance(s, RunWord) and n <= 4096:
        s = tuple(s)
        for d in range(1, n // 2 + 1):
            if n % d == 0 and s[:d] * (n // d) == s:
                return s[:d], n // d
        return None
    # a linear word u^k is invariant under rotation by |u|; look for the
    # shortest run shift that maps the cyclic run sequence to itself
    cyc, _ = _cyclic_runs(s)
    R = len(cyc)
    if R == 1:
        return s[:1], n
    for sh in range(1, R):
        if R % sh == 0 and cyc[sh:] + cyc[:sh] == cyc:
            period = sum(k for _, k in cyc[:sh])
            return s[:period], n // period
    return None


def letter_order(alphabet: Sequence[str]) -> dict:
    """Shortlex letter ranks: s1, s1^-1, s2, s2^-1, ..."""
    rank = {}
    for i, s in enumerate(alphabet):
        rank[Letter(s, 1)] = 2 * i
        rank[Letter(s, -1)] = 2 * i + 1
    return rank


def _compare_runs(ra, rb, rank) -> int:
    """Lexicographic comparison of two run sequences."""
    i = j = 0
    ka = ra[0][1] if ra else 0
    kb = rb[0][1] if rb else 0
    while i < len(ra) and j < len(rb):
        xa, xb = ra[i][0], rb[j][0]
        if xa != xb:
            return -1 if rank[xa] < rank[xb] else 1
        c = min(ka, kb)
        ka -= c
        kb -= c
        if ka == 0:
            i += 1
            ka = ra[i][1] if i < len(ra) else 0
        if kb == 0:
            j += 1
            kb = rb[j][1] if j < len(rb) else 0
    if i == len(ra) and j == len(rb):
        return 0
    return -1 if i == len(ra) else 1


def compare_shortlex(u: Sequence[Letter], v: Sequence[Letter], alphabet: Sequence[str]) -> int:
    if len(u) != len(v):
        return -1 if len(u) < len(v) else 1
    return _compare_runs(runs_of(u), runs_of(v), letter_order(alphabet))


def shortlex_key(w: Sequence[Letter], alphabet: Sequence[str]):
    rank = letter_order(alphabet)
    if not isinstance(w, RunWord):
        return (len(w), tuple(rank[x] for x in w))
    return (len(w), _RunKey(w.runs, rank))


class _RunKey:
    __slots__ = ("runs", "rank")

    def __init__(self, runs, rank):
        self.runs, self.rank = runs, rank

    def __lt__(self, other):
        return _compare_runs(self.runs, other.runs, self.rank) < 0

    def __eq__(self, other):
        return self.runs == other.runs


def sort_shortlex(words: Iterable[Sequence[Letter]], alphabet: Sequence[str]) -> list:
    return sorted(words, key=cmp_to_key(lambda u, v: compare_shortlex(u, v, alphabet)))


def class_representative(w, alphabet: Sequence[str]):
    """Shortlex-least element of the class of w (cyclic conjugates and their inverses)."""
    cw = w if isinstance(w, CyclicWord) else cyclic_reduce(w)[0]
    rep = cw.representative
    rank = letter_order(alphabet)
    if not isinstance(rep, RunWord):
        cands = cw.rotations() + cw.inverse().rotations()
        return min(cands, key=lambda u: tuple(rank[x] for x in u))
    # the least rotation starts at a run start or at the last letter of a run
    best = None
    for base in (rep, inverse(rep)):
        cyc, off = _cyclic_runs(base)
        starts = []
        pos = -off
        for x, k in cyc:
            starts += [pos % len(base), (pos + k - 1) % len(base)]
            pos += k
        for s in sorted(set(starts)):
            cand = rotate(base, s)
            if best is None or _compare_runs(cand.runs, best.runs, rank) < 0:
                best = cand
    return best


@dataclass(frozen=True)
class Presentation:
    alphabet: tuple
    relators: tuple = ()
    truncation: Optional[int] = None
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        rels = []
        for r in self.relators:
            rels.append(r if isinstance(r, RunWord) else tuple(Letter(*x) for x in r))
        object.__setattr__(self, "relators", tuple(rels))
        known = set(self.alphabet)
        if len(known) != len(self.alphabet):
            raise ValueError("duplicate generator in alphabet")
        for r in rels:
            for x, _ in runs_of(r):
                if x.symbol not in known:
                    raise ValueError(f"symbol {x.symbol!r} not in alphabet")


def concise_refinement(p: Presentation) -> Presentation:
    """One shortlex-least representative per class of the symmetrized relators."""
    reps = {}
    for r in p.relators:
        rep = class_representative(r, p.alphabet)
        reps[RunWord.of(rep).runs] = rep
    rels = sort_shortlex(reps.values(), p.alphabet)
    return Presentation(p.alphabet, tuple(rels), p.truncation)


def _occurrences(p: Presentation):
    counts = {}
    for i, r in enumerate(p.relators):
        for x, k in runs_of(r):
            counts.setdefault(x, {}).setdefault(i, 0)
            counts[x][i] += k
    return counts


def redundant_letters(p: Presentation) -> dict[int, list[Letter]]:
    """Relator index -> letters s^e occurring once there, nowhere else, and s^-e nowhere."""
    counts = _occurrences(p)
    out = {}
    for i, r in enumerate(p.relators):
        for x, _ in runs_of(r):
            if counts[x] == {i: 1} and x.inv() not in counts:
                out.setdefault(i, []).append(x)
    return out


def tietze_reduce(p: Presentation) -> Presentation:
    """One simultaneous reduction pass; not iterated.

    For each redundant relator we drop the redundant generator whose
    occurrence comes last in the relator.
    """
    red = redundant_letters(p)
    drop_gens = {letters[-1].symbol for letters in red.values()}
    rels = tuple(r for i, r in enumerate(p.relators) if i not in red)
    alphabet = tuple(s for s in p.alphabet if s not in drop_gens)
    return Presentation(alphabet, rels, p.truncation)
