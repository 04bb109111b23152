"""Rank-oracle matroids, closure and flat enumeration.

Subsets of the ground set ``0..n-1`` are plain ``int`` bitmasks throughout:
bit ``i`` set means element ``i`` is present.  The ``rank``/``closure`` methods
on :class:`Matroid` take masks and do no validation; the module-level
functions of the same names accept any iterable of indices and check bounds.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BasepointLoop, OutOfRange, TooLarge
from .finite_geometry import FieldSpec, make_field, pg_points

ElementSet = int

_CACHE_LIMIT = 1 << 21


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for i in elements:
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Matroid:
    """A matroid on ``0..n-1`` given by its rank function."""

    kind = "abstract"

    def __init__(self, n: int, labels: Sequence[str] | None = None):
        self.n = n
        self.full = (1 << n) - 1
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise ValueError(f"expected {n} labels, got {len(self.labels)}")
        self._cache: dict[int, int] = {}
        self._full_rank: int | None = None

    def rank(self, X: int) -> int:
        raise NotImplementedError

    def cached_rank(self, X: int) -> int:
        c = self._cache
        r = c.get(X)
        if r is None:
            if len(c) > _CACHE_LIMIT:
                c.clear()
            r = c[X] = self.rank(X)
        return r

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self.rank(self.full)
        return self._full_rank

    def closure(self, X: int) -> int:
        r = self.rank(X)
        out = X
        rest = self.full & ~X
        while rest:
            b = rest & -rest
            rest ^= b
            if self.rank(X | b) == r:
                out |= b
        return out

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, rank={self.full_rank})"


class Uniform(Matroid):
    kind = "uniform"

    def __init__(self, r: int, n: int, labels=None):
        if not 0 <= r <= n:
            raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
        super().__init__(n, labels)
        self.r = r

    def rank(self, X):
        return min(X.bit_count(), self.r)

    cached_rank = rank

    def closure(self, X):
        return X if X.bit_count() < self.r else self.full


class Linear(Matroid):
    """Column matroid of vectors over GF(q)."""

    kind = "linear"

    def __init__(self, spec: FieldSpec, columns: Sequence[Sequence[int]], labels=None):
        columns = [tuple(c) for c in columns]
        if columns and len({len(c) for c in columns}) != 1:
            raise ValueError("columns must share one length")
        for c in columns:
            if any(not 0 <= x < spec.q for x in c):
                raise ValueError(f"column {c} has entries outside GF({spec.q})")
        super().__init__(len(columns), labels)
        self.spec = spec
        self.columns = columns

    def rank(self, X):
        c = self._cache.get(X)
        if c is not None:
            return c
        r = self._eliminate([self.columns[i] for i in members(X)])
        if len(self._cache) > _CACHE_LIMIT:
            self._cache.clear()
        self._cache[X] = r
        return r

    cached_rank = rank

    def _eliminate(self, rows):
        F = self.spec
        rows = [list(v) for v in rows]
        if not rows:
            return 0
        width = len(rows[0])
        rank = 0
        for col in range(width):
            piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            s = F.inv(rows[rank][col])
            prow = [F.mul(s, x) for x in rows[rank]]
            rows[rank] = prow
            for i in range(len(rows)):
                if i != rank and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], prow)]
            rank += 1
            if rank == len(rows):
                break
        return rank


class LineSetRank3(Matroid):
    """Simple rank-3 matroid determined by its lines.

    Pairs of elements not covered by any given line become two-element lines.
    """

    kind = "line_set_rank3"

    def __init__(self, n: int, lines: Iterable, labels=None):
        super().__init__(n, labels)
        given = [ln if isinstance(ln, int) else mask_of(ln) for ln in lines]
        through: list[list[int]] = [[] for _ in range(n)]
        covered = [1 << i for i in range(n)]
        for ln in given:
            if ln.bit_count() < 2:
                raise ValueError(f"line {members(ln)} has fewer than 2 elements")
            if ln >> n:
                raise OutOfRange(f"line {members(ln)} leaves the ground set of size {n}")
            for x in members(ln):
                if covered[x] & ln & ~(1 << x):
                    raise ValueError(f"two lines share a pair through element {x}")
                covered[x] |= ln
                through[x].append(ln)
        completed = list(given)
        for x in range(n):
            missing = self.full & ~covered[x] & ~((1 << (x + 1)) - 1)
            for y in members(missing):
                ln = (1 << x) | (1 << y)
                completed.append(ln)
                through[x].append(ln)
                through[y].append(ln)
                covered[y] |= ln
        if n < 3 or any(ln == self.full for ln in completed):
            raise ValueError("line set does not define a rank-3 matroid")
        self.lines = tuple(completed)
        self.n_given = len(given)
        self.lines_through = tuple(tuple(t) for t in through)

    def line_containing(self, X):
        """The line containing ``X`` (at least two elements), or 0."""
        a = lowest(X)
        for ln in self.lines_through[a]:
            if not X & ~ln:
                return ln
        return 0

    def rank(self, X):
        c = X.bit_count()
        if c <= 2:
            return c
        return 2 if self.line_containing(X) else 3

    cached_rank = rank

    def closure(self, X):
        c = X.bit_count()
        if c <= 1:
            return X
        return self.line_containing(X) or self.full


class ParallelConn(Matroid):
    """Parallel connection of ``left`` and ``right`` along a shared basepoint.

    Left elements keep their indices ``0..n1-1``; right element ``j != b2``
    maps to ``n1 + j`` (``j < b2``) or ``n1 + j - 1`` (``j > b2``); ``b2``
    maps onto ``b1``.
    """

    kind = "parallel_connection"

    def __init__(self, left: Matroid, b1: int, right: Matroid, b2: int, labels=None):
        n1 = left.n
        if labels is None:
            labels = left.labels + tuple(l for j, l in enumerate(right.labels) if j != b2)
        super().__init__(n1 + right.n - 1, labels)
        self.left, self.right = left, right
        self.b1, self.b2 = b1, b2
        self._n1 = n1
        self._lowmask = (1 << b2) - 1
        self._e1 = 1 << b1
        self._e2 = 1 << b2

    def embed_right(self, j: int) -> int:
        if j == self.b2:
            return self.b1
        return self._n1 + (j if j < self.b2 else j - 1)

    def embed_right_mask(self, Y: int) -> int:
        out = self._e1 if Y & self._e2 else 0
        Y &= ~self._e2
        hi = (Y & self._lowmask) | ((Y >> (self.b2 + 1)) << self.b2)
        return out | (hi << self._n1)

    def split(self, X: int) -> tuple[int, int]:
        X1 = X & self.left.full
        hi = X >> self._n1
        X2 = (hi & self._lowmask) | ((hi >> self.b2) << (self.b2 + 1))
        if X & self._e1:
            X2 |= self._e2
        return X1, X2

    def rank(self, X):
        X1, X2 = self.split(X)
        r1, r2 = self.left.cached_rank, self.right.cached_rank
        a = r1(X1) + r2(X2)
        if X & self._e1:
            return a - 1
        b = r1(X1 | self._e1) + r2(X2 | self._e2) - 1
        return a if a < b else b


@dataclass(frozen=True)
class Flat:
    elements: ElementSet
    rank: int

    @property
    def members(self) -> list[int]:
        return members(self.elements)

    def __len__(self):
        return self.elements.bit_count()


def _as_mask(M: Matroid, X) -> int:
    if isinstance(X, int):
        if X < 0:
            raise OutOfRange("negative mask")
        m = X
    else:
        m = 0
        for i in X:
            if not 0 <= i < M.n:
                raise OutOfRange(f"element {i} outside ground set of size {M.n}")
            m |= 1 << i
    if m >> M.n:
        raise OutOfRange(f"subset leaves the ground set of size {M.n}")
    return m


def rank(M: Matroid, X) -> int:
    return M.rank(_as_mask(M, X))


def closure(M: Matroid, X) -> ElementSet:
    return M.closure(_as_mask(M, X))


def covers(M: Matroid, F: int) -> list[int]:
    """Flats covering the flat ``F``; they partition the complement of ``F``."""
    out = []
    rest = M.full & ~F
    while rest:
        C = M.closure(F | (rest & -rest))
        out.append(C)
        rest &= ~C
    return out


def canonical_key(mask: int) -> tuple[int, ...]:
    return tuple(members(mask))


def _covers_chunk(M, chunk):
    return [covers(M, F) for F in chunk]


def flats_by_rank(M: Matroid, k: int, workers: int = 1) -> list[Flat]:
    """All rank-``k`` flats, in ascending order of their sorted element tuples.

    Built level by level from ``closure(empty)``; ``workers > 1`` expands each
    level in a process pool without changing the result.
    """
    if not 0 <= k <= M.full_rank:
        raise ValueError(f"k={k} outside 0..{M.full_rank}")
    level = [M.closure(0)]
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for _ in range(k):
            nxt: set[int] = set()
            if pool is None or len(level) < 4 * workers:
                for F in level:
                    nxt.update(covers(M, F))
            else:
                size = -(-len(level) // (4 * workers))
                chunks = [level[i:i + size] for i in range(0, len(level), size)]
                for res in pool.map(_covers_chunk, itertools.repeat(M), chunks):
                    for cs in res:
                        nxt.update(cs)
            level = sorted(nxt, key=canonical_key)
    finally:
        if pool is not None:
            pool.shutdown()
    return [Flat(F, k) for F in level]


def hyperplanes(M: Matroid, workers: int = 1) -> list[Flat]:
    if M.full_rank < 1:
        raise ValueError("a rank-0 matroid has no hyperplanes")
    return flats_by_rank(M, M.full_rank - 1, workers)


def is_flat(M: Matroid, X: int) -> bool:
    return M.closure(X) == X


def parallel_connection(M1: Matroid, e1: int, M2: Matroid, e2: int) -> ParallelConn:
    if not 0 <= e1 < M1.n or not 0 <= e2 < M2.n:
        raise OutOfRange("basepoint outside the ground set")
    if M1.rank(1 << e1) == 0 or M2.rank(1 << e2) == 0:
        raise BasepointLoop("the basepoint is a loop")
    return ParallelConn(M1, e1, M2, e2)


def circuits_bruteforce(M: Matroid) -> set[ElementSet]:
    """Minimal dependent sets by scanning all subsets in order of size."""
    if M.n > 12:
        raise TooLarge(f"exhaustive circuit scan limited to 12 elements, got {M.n}")
    found: list[int] = []
    for size in range(1, M.n + 1):
        for combo in itertools.combinations(range(M.n), size):
            X = mask_of(combo)
            if M.rank(X) < size and not any(C & X == C for C in found):
                found.append(X)
    return set(found)


def uniform(r: int, n: int) -> Uniform:
    return Uniform(r, n)


def projective_geometry(rank: int, q: int) -> Linear:
    """PG(rank-1, q) as the column matroid of its normalized points."""
    spec = make_field(q)
    return Linear(spec, [p.coords for p in pg_points(rank, spec)])
