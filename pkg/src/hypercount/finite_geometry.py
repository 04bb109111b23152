"""Arithmetic in GF(p^k) and the points/lines of projective geometries.

Field elements are the integers ``0..q-1``.  An element ``a`` stands for the
polynomial whose coefficients are the base-``p`` digits of ``a``, lowest
degree first, reduced modulo the field's defining polynomial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DivisionByZero, NotPrimePower, Unsupported

MAX_ORDER = 128

# Conway polynomials, coefficients lowest degree first (monic).
CONWAY = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    16: (1, 1, 0, 0, 1),
    32: (1, 0, 1, 0, 0, 1),
    64: (1, 1, 0, 1, 1, 0, 1),
    128: (1, 1, 0, 0, 0, 0, 0, 1),
    9: (2, 2, 1),
    27: (1, 2, 0, 1),
    81: (2, 0, 0, 2, 1),
    25: (2, 4, 1),
    125: (3, 3, 0, 1),
    49: (3, 6, 1),
    121: (2, 7, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power_decomposition(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` and ``p`` prime, else ``None``."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    return (p, k) if rest == 1 else None


def is_prime_power(q: int) -> bool:
    return prime_power_decomposition(q) is not None


# -- polynomials over GF(p): tuples of coefficients, lowest degree first --

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mod(a, m, p):
    """Remainder of ``a`` divided by the monic polynomial ``m`` over GF(p)."""
    a = _trim(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        a = _trim(a)
    return a


def is_irreducible(modulus, p: int) -> bool:
    """Check that ``modulus`` has no monic factor of degree 1..k//2."""
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod(modulus, (*low, 1), p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(q) with ``q = p**k``; arithmetic runs off precomputed tables."""

    p: int
    k: int
    q: int
    modulus: tuple[int, ...] | None
    add_table: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    mul_table: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    neg_table: tuple[int, ...] = field(repr=False, compare=False)
    inv_table: tuple[int, ...] = field(repr=False, compare=False)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0 in GF(%d)" % self.q)
        return self.inv_table[a]

    def digits(self, a: int) -> list[int]:
        """Coefficient vector of ``a``, lowest degree first, length ``k``."""
        return _digits(a, self.p, self.k)

    def encode(self, coeffs) -> int:
        return _encode(coeffs, self.p)


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    if q > MAX_ORDER:
        raise Unsupported(f"q={q} exceeds the supported maximum {MAX_ORDER}")
    pk = prime_power_decomposition(q)
    if pk is None:
        raise NotPrimePower(f"{q} is not a prime power")
    p, k = pk
    if not is_prime(p):  # trial-division recheck
        raise NotPrimePower(f"{q} is not a prime power")

    if k == 1:
        modulus = None
        add = tuple(tuple((a + b) % p for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % p for b in range(q)) for a in range(q))
    else:
        if q not in CONWAY:
            raise Unsupported(f"no modulus tabulated for q={q}")
        modulus = CONWAY[q]
        if len(modulus) != k + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
            raise Unsupported(f"tabulated modulus for q={q} is not irreducible")
        vecs = [_digits(a, p, k) for a in range(q)]
        add = tuple(
            tuple(_encode([(x + y) % p for x, y in zip(va, vb)], p) for vb in vecs)
            for va in vecs
        )
        mul = tuple(
            tuple(_encode(_polymulmod(va, vb, modulus, p), p) for vb in vecs)
            for va in vecs
        )

    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = [0] * q
    for a in range(1, q):
        inv[a] = next(b for b in range(1, q) if mul[a][b] == 1)
    return FieldSpec(p, k, q, modulus, add, mul, neg, tuple(inv))


def _digits(a, p, k):
    out = []
    for _ in range(k):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _encode(coeffs, p):
    return sum(c * p ** i for i, c in enumerate(coeffs))


def _polymulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return poly_mod(prod, m, p)


def field_arith(spec: FieldSpec, op: str, a: int, b: int | None = None) -> int:
    """Apply ``op`` in {'add', 'mul', 'neg', 'inv'} to encoded elements."""
    for v in (a, b):
        if v is not None and not 0 <= v < spec.q:
            raise ValueError(f"{v} is not an element of GF({spec.q})")
    if op == "add":
        return spec.add(a, b)
    if op == "mul":
        return spec.mul(a, b)
    if op == "neg":
        return spec.neg(a)
    if op == "inv":
        return spec.inv(a)
    raise ValueError(f"unknown field operation {op!r}")


# -- projective geometry --

@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, ...]


@dataclass(frozen=True)
class LineOfPlane:
    coeffs: tuple[int, int, int]
    points: tuple[int, ...]


def normalize(spec: FieldSpec, vec) -> tuple[int, ...]:
    """Scale ``vec`` so its first nonzero coordinate is 1."""
    for c in vec:
        if c:
            s = spec.inv(c)
            return tuple(spec.mul(s, x) for x in vec)
    raise ValueError("the zero vector is not a projective point")


def _normalized_vectors(q: int, rank: int):
    out = []
    for lead in range(rank):
        for tail in itertools.product(range(q), repeat=rank - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    out.sort()
    return out


def pg_points(rank: int, spec: FieldSpec) -> list[ProjPoint]:
    """Points of PG(rank-1, q) in lexicographic order of normalized coordinates."""
    if rank < 2:
        raise ValueError("rank must be at least 2")
    return [ProjPoint(v) for v in _normalized_vectors(spec.q, rank)]


def pg_lines_plane(spec: FieldSpec) -> list[LineOfPlane]:
    """All lines of PG(2, q) with their incident point indices."""
    q = spec.q
    index = {v: i for i, v in enumerate(_normalized_vectors(q, 3))}
    free_pts = _normalized_vectors(q, 2)
    lines = []
    for a in _normalized_vectors(q, 3):
        lead = a.index(1)
        others = [j for j in range(3) if j != lead]
        pts = []
        for u, v in free_pts:
            x = [0, 0, 0]
            x[others[0]], x[others[1]] = u, v
            # a[lead] == 1, so x_lead = -(sum of the other terms)
            s = spec.add(spec.mul(a[others[0]], u), spec.mul(a[others[1]], v))
            x[lead] = spec.neg(s)
            pts.append(index[normalize(spec, x)])
        lines.append(LineOfPlane(a, tuple(sorted(pts))))
    return lines
