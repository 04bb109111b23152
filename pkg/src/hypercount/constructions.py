"""Builders for the rank-3 line-rich matroids M(q, t) and their towers.

``build_mqt`` starts from PG(2, q), deletes a point ``e`` and keeps, on each
line through ``e``, only a ``t``-element set T(L).  Lines through ``e`` are
replaced by all two-point lines inside each T(L), which leaves every element
on ``q + t - 1`` lines.  ``build_tower`` glues copies of a rank-3 matroid at
a common element (plus a long line for even rank) so that unions of lines
avoiding the glue point become hyperplanes.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .errors import BadParams, BadRank, NoPrimePower, NoTriangle, VerificationFailed
from .finite_geometry import LineOfPlane, is_prime_power, make_field, pg_lines_plane
from .interchange import matroid_to_doc
from .matroid_core import (
    LineSetRank3,
    Matroid,
    ParallelConn,
    Uniform,
    flats_by_rank,
    mask_of,
    members,
    parallel_connection,
)

PRIME_POWER_TABLE = (7, 9, 13, 19, 32, 59, 113)


@dataclass(frozen=True)
class MqtArtifacts:
    q: int
    t: int
    e: int
    triangle: tuple[int, int, int]
    pencil: tuple[int, ...]
    tfamily: dict[int, tuple[int, ...]]
    X: tuple[int, ...]
    lines1: tuple[tuple[int, ...], ...]
    lines2: tuple[tuple[int, ...], ...]

    @property
    def relabel(self) -> dict[int, int]:
        """PG point index -> ground index of M(q, t)."""
        return {p: i for i, p in enumerate(self.X)}

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "t": self.t,
            "e": self.e,
            "triangle": list(self.triangle),
            "pencil": list(self.pencil),
            "tfamily": {str(k): list(v) for k, v in self.tfamily.items()},
            "X": list(self.X),
            "lines1": [list(l) for l in self.lines1],
            "lines2": [list(l) for l in self.lines2],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MqtArtifacts":
        return cls(
            q=d["q"],
            t=d["t"],
            e=d["e"],
            triangle=tuple(d["triangle"]),
            pencil=tuple(d["pencil"]),
            tfamily={int(k): tuple(v) for k, v in d["tfamily"].items()},
            X=tuple(d["X"]),
            lines1=tuple(tuple(l) for l in d["lines1"]),
            lines2=tuple(tuple(l) for l in d["lines2"]),
        )


@dataclass
class TowerSpec:
    ell: int
    r: int
    k: int
    base: Matroid = field(repr=False)
    e: int
    copies: list[list[int]]
    attachment: list[int] | None
    basepoint: int
    avoiding: list[int] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "r": self.r,
            "k": self.k,
            "e": self.e,
            "basepoint": self.basepoint,
            "copies": [list(c) for c in self.copies],
            "attachment": list(self.attachment) if self.attachment is not None else None,
        }


def choose_triangle(lines: list[LineOfPlane], e: int) -> tuple[int, int, int]:
    """First triple of lines, in line order, avoiding ``e`` and not concurrent."""
    avoid = [i for i, ln in enumerate(lines) if e not in ln.points]
    sets = {i: set(lines[i].points) for i in avoid}
    for a, b, c in itertools.combinations(avoid, 3):
        if not sets[a] & sets[b] & sets[c]:
            return (a, b, c)
    raise NoTriangle(f"no triangle avoiding point {e}")


def build_mqt(q: int, t: int, e: int = 0) -> tuple[LineSetRank3, MqtArtifacts]:
    """M(q, t) on (q+1)t elements with q^2 + (q+1)C(t,2) lines."""
    if q < 3:
        raise BadParams(f"q must be at least 3, got {q}")
    if not 3 <= t <= q:
        raise BadParams(f"need 3 <= t <= q, got q={q}, t={t}")
    spec = make_field(q)
    lines = pg_lines_plane(spec)
    tri = choose_triangle(lines, e)
    tri_pts = set().union(*(lines[i].points for i in tri))

    pencil = tuple(i for i, ln in enumerate(lines) if e in ln.points)
    tfamily = {}
    for i in pencil:
        rest = [p for p in lines[i].points if p != e]
        chosen = sorted(p for p in rest if p in tri_pts)
        for p in rest:
            if len(chosen) == t:
                break
            if p not in chosen:
                chosen.append(p)
        tfamily[i] = tuple(sorted(chosen))

    X = tuple(sorted(p for T in tfamily.values() for p in T))
    Xset = set(X)
    pset = set(pencil)
    lines1 = tuple(
        tuple(p for p in ln.points if p in Xset)
        for i, ln in enumerate(lines)
        if i not in pset
    )
    lines2 = tuple(
        pair for i in pencil for pair in itertools.combinations(tfamily[i], 2)
    )
    art = MqtArtifacts(q, t, e, tri, pencil, tfamily, X, lines1, lines2)

    idx = art.relabel
    ground_lines = [mask_of(idx[p] for p in ln) for ln in lines1 + lines2]
    M = LineSetRank3(len(X), ground_lines, labels=[f"p{p}" for p in X])
    return M, art


def mqt_line_count(q: int, t: int) -> int:
    return q * q + (q + 1) * t * (t - 1) // 2


def select_params_lemma(ell: int) -> tuple[int, int]:
    """(q, t) such that M(q, t) has no U_{2,ell+2}-minor and many lines."""
    if ell < 10:
        raise BadParams(f"ell must be at least 10, got {ell}")
    if ell >= 127:
        q = 1
        while 4 * q <= ell + 2:
            q *= 2
        # now q is the least power of 2 with 4q > ell+2
        assert 2 * q <= ell + 2
        return q, q
    for q in PRIME_POWER_TABLE:
        if ell + 2 <= 2 * q <= 2 * (ell - 3):
            return q, ell + 2 - q
    raise BadParams(f"no tabulated prime power fits ell={ell}")


def select_params_corollary(ell: int) -> int:
    """Largest prime power q >= 5 with (ell+2)/4 < q <= (ell+2)/2."""
    if ell < 10:
        raise BadParams(f"ell must be at least 10, got {ell}")
    for q in range((ell + 2) // 2, 4, -1):
        if 4 * q <= ell + 2:
            break
        if is_prime_power(q):
            return q
    raise NoPrimePower(f"no prime power >= 5 in ((ell+2)/4, (ell+2)/2] for ell={ell}")


def line_degree(N: LineSetRank3, x: int) -> int:
    return len(N.lines_through[x])


def min_degree_element(N: Matroid) -> int:
    """Ground element on the fewest lines; lowest index on ties."""
    lines = flats_by_rank(N, 2)
    deg = [0] * N.n
    for F in lines:
        for x in F.members:
            deg[x] += 1
    return min(range(N.n), key=lambda x: (deg[x], x))


def build_tower(N: Matroid, e: int, ell: int, r: int) -> tuple[Matroid, TowerSpec]:
    """Rank-r parallel connection of copies of N at e (plus U_{2,ell+1} if r even)."""
    if r < 3:
        raise BadRank(f"tower rank must be at least 3, got {r}")
    if N.full_rank != 3:
        raise BadRank(f"base matroid must have rank 3, got {N.full_rank}")
    k = (r - 1) // 2
    M: Matroid = N
    copies = [list(range(N.n))]
    for i in range(1, k):
        M = parallel_connection(M, e, N, e)
        copies.append([M.embed_right(j) for j in range(N.n)])
    attachment = None
    if r % 2 == 0:
        M = parallel_connection(M, e, Uniform(2, ell + 1), 0)
        attachment = [M.embed_right(j) for j in range(ell + 1)]

    if M is N:
        M = copy.copy(N)  # relabel without touching the caller's matroid
    labels = [""] * M.n
    for c, emb in enumerate(copies, start=1):
        for j, g in enumerate(emb):
            if not labels[g]:
                labels[g] = f"c{c}:{j}"
    if attachment is not None:
        for j, g in enumerate(attachment):
            if not labels[g]:
                labels[g] = f"c{k + 1}:{j}"
    M.labels = tuple(labels)

    spec = TowerSpec(ell, r, k, N, e, copies, attachment, e, lines_avoiding(N, e))
    if M.full_rank != r:
        raise BadRank(f"tower has rank {M.full_rank}, expected {r}")
    return M, spec


def lines_avoiding(N: Matroid, e: int) -> list[int]:
    return [F.elements for F in flats_by_rank(N, 2) if not F.elements >> e & 1]


def family_size(spec: TowerSpec) -> int:
    count = len(spec.avoiding) ** spec.k
    return count * spec.ell if spec.attachment is not None else count


def _extras(spec: TowerSpec) -> list[int]:
    if spec.attachment is None:
        return [0]
    return [1 << g for g in spec.attachment if g != spec.basepoint]


def lower_bound_family(spec: TowerSpec) -> Iterator[int]:
    """Unions of one e-avoiding line per copy (plus one point of the long line)."""
    per_copy = [
        [mask_of(emb[j] for j in members(L)) for L in spec.avoiding] for emb in spec.copies
    ]
    extra = _extras(spec)
    for choice in itertools.product(*per_copy):
        H = 0
        for L in choice:
            H |= L
        for x in extra:
            yield H | x


def family_member(spec: TowerSpec, index: int) -> int:
    """The ``index``-th set that :func:`lower_bound_family` yields."""
    lines = spec.avoiding
    extra = _extras(spec)
    index, xi = divmod(index, len(extra))
    digits = []
    for _ in range(spec.k):
        index, d = divmod(index, len(lines))
        digits.append(d)
    digits.reverse()  # itertools.product varies the last copy fastest
    H = extra[xi]
    for emb, d in zip(spec.copies, digits):
        H |= mask_of(emb[j] for j in members(lines[d]))
    return H


def check_mqt_witness(art: MqtArtifacts) -> None:
    """Re-derive every M(q, t) invariant from PG(2, q); raise on the first failure."""
    def fail(check, detail=""):
        raise VerificationFailed(check, detail)

    q, t = art.q, art.t
    if not 3 <= t <= q:
        fail("mqt_params", f"q={q}, t={t}")
    lines = pg_lines_plane(make_field(q))
    pts = [set(ln.points) for ln in lines]
    if len(set(art.triangle)) != 3:
        fail("mqt_triangle", "lines not distinct")
    for i in art.triangle:
        if art.e in pts[i]:
            fail("mqt_triangle", f"line {i} contains e")
    a, b, c = art.triangle
    if pts[a] & pts[b] & pts[c]:
        fail("mqt_triangle", "lines are concurrent")
    pencil = tuple(i for i, p in enumerate(pts) if art.e in p)
    if pencil != art.pencil:
        fail("mqt_pencil")
    tri_pts = pts[a] | pts[b] | pts[c]
    seen: set[int] = set()
    for i in pencil:
        T = set(art.tfamily.get(i, ()))
        if len(T) != t or not T <= pts[i] - {art.e} or not (pts[i] & tri_pts) <= T:
            fail("mqt_tfamily", f"T(L) for line {i}")
        if T & seen:
            fail("mqt_tfamily", "T(L) sets overlap")
        seen |= T
    if tuple(sorted(seen)) != art.X or len(art.X) != (q + 1) * t:
        fail("mqt_ground")
    pset = set(pencil)
    lines1 = {tuple(sorted(pts[i] & seen)) for i in range(len(lines)) if i not in pset}
    lines2 = {
        pair for i in pencil for pair in itertools.combinations(sorted(art.tfamily[i]), 2)
    }
    if lines1 != set(art.lines1) or any(len(l) < 2 for l in lines1):
        fail("mqt_lines1")
    if lines2 != set(art.lines2) or lines1 & lines2:
        fail("mqt_lines2")


def tower_from_doc(M: Matroid, d: dict) -> TowerSpec:
    """Rebuild a TowerSpec for the parsed tower ``M`` and check it against ``d``."""

    chain = []
    node = M
    while isinstance(node, ParallelConn):
        chain.append(node)
        node = node.left
    base = node
    chain.reverse()
    e = d["e"]
    r, ell = d["r"], d["ell"]
    k = (r - 1) // 2
    copies = [list(range(base.n))]
    attachment = None
    base_doc = matroid_to_doc(base)
    base_doc.pop("labels", None)
    for i, pc in enumerate(chain):
        right_doc = matroid_to_doc(pc.right)
        right_doc.pop("labels", None)
        if pc.b1 != e or pc.b2 != (0 if isinstance(pc.right, Uniform) else e):
            raise VerificationFailed("tower_basepoint", f"connection {i}")
        if i < k - 1:
            if right_doc != base_doc:
                raise VerificationFailed("tower_copy", f"copy {i + 2} differs from the base")
            copies.append([pc.embed_right(j) for j in range(base.n)])
        elif r % 2 == 0 and i == k - 1:
            if right_doc != {"type": "uniform", "r": 2, "n": ell + 1}:
                raise VerificationFailed("tower_attachment")
            attachment = [pc.embed_right(j) for j in range(ell + 1)]
        else:
            raise VerificationFailed("tower_shape", "too many connections")
    if len(copies) != k or (r % 2 == 0) != (attachment is not None):
        raise VerificationFailed("tower_shape")
    if copies != d["copies"] or attachment != d["attachment"]:
        raise VerificationFailed("tower_embeddings")
    return TowerSpec(ell, r, k, base, e, copies, attachment, e, lines_avoiding(base, e))
