"""Line counts, uniform-line-minor detection, bounds and counterexample verdicts.

All comparisons are exact integer arithmetic; fractional thresholds are
cleared by cross-multiplying before comparing.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import asdict, dataclass, field

from .constructions import (
    TowerSpec,
    build_mqt,
    family_member,
    family_size,
    lower_bound_family,
    mqt_line_count,
    min_degree_element,
    select_params_corollary,
    select_params_lemma,
)
from .errors import TooLarge, VerificationFailed
from .matroid_core import Matroid, Uniform, covers, flats_by_rank, hyperplanes, mask_of

log = logging.getLogger(__name__)

DEFAULT_SAMPLE = 500
DISTINCT_ENUMERATION_LIMIT = 2_000_000


def count_lines(M: Matroid) -> int:
    return len(flats_by_rank(M, 2))


def count_lines_avoiding(M: Matroid, e: int) -> int:
    return sum(1 for F in flats_by_rank(M, 2) if not F.elements >> e & 1)


def max_rank2_minor_points(M: Matroid, workers: int = 1) -> int:
    """Largest n such that M has a U_{2,n}-minor.

    Contracting a corank-2 flat leaves a rank-2 matroid whose points are the
    flats covering it, so the answer is the largest cover count.
    """
    if M.full_rank < 2:
        raise ValueError("matroid has rank below 2")
    return max(len(covers(M, F.elements)) for F in flats_by_rank(M, M.full_rank - 2, workers))


def in_U(M: Matroid, ell: int) -> bool:
    return max_rank2_minor_points(M) <= ell + 1


def bonin_bound(ell: int, r: int) -> int:
    """Number of points (and hyperplanes) of PG(r-1, ell): (ell^r - 1)/(ell - 1)."""
    if ell < 2 or r < 1:
        raise ValueError(f"need ell >= 2 and r >= 1, got ell={ell}, r={r}")
    num = ell ** r - 1
    assert num % (ell - 1) == 0
    return num // (ell - 1)


def kung_point_check(M: Matroid, ell: int) -> bool:
    return len(flats_by_rank(M, 1)) <= bonin_bound(ell, M.full_rank)


def bruteforce_minor_oracle(M: Matroid, n: int) -> bool:
    """Whether M has a U_{2,n}-minor, by scanning every contraction set."""
    if M.n > 12:
        raise TooLarge(f"brute-force minor scan limited to 12 elements, got {M.n}")
    top = M.full_rank
    for size in range(M.n + 1):
        for C in itertools.combinations(range(M.n), size):
            Cm = mask_of(C)
            rc = M.rank(Cm)
            if top - rc != 2:
                continue
            reps: list[int] = []
            for x in range(M.n):
                b = 1 << x
                if Cm & b or M.rank(Cm | b) == rc:
                    continue
                if all(M.rank(Cm | b | (1 << y)) == rc + 2 for y in reps):
                    reps.append(x)
            if len(reps) >= n:
                return True
    return False


def lemma24_numbers(ell: int) -> dict:
    q, t = select_params_lemma(ell)
    w2 = mqt_line_count(q, t)
    return {"ell": ell, "q": q, "t": t, "W2": w2, "lhs": 3 * w2, "rhs": 3 * ell * ell + 7 * ell + 12}


def check_lemma24_inequality(ell: int) -> bool:
    """W2 > ell^2 + (7/3)ell + 4 for the selected M(q, t), scaled by 3."""
    if not 10 <= ell <= 254:
        raise ValueError(f"ell must lie in 10..254, got {ell}")
    d = lemma24_numbers(ell)
    return d["lhs"] > d["rhs"]


def corollary_numbers(ell: int, r: int, enumerate_lines: bool = True) -> dict:
    """Quantities behind the (2^-7 ell^3)^((r-2)/2) hyperplane bound."""
    if ell < 10 or r < 3:
        raise ValueError(f"need ell >= 10 and r >= 3, got ell={ell}, r={r}")
    q = select_params_corollary(ell)
    w2_formula = mqt_line_count(q, q)
    if enumerate_lines:
        N, _ = build_mqt(q, q)
        e = min_degree_element(N)
        w2 = count_lines(N)
        w2e = count_lines_avoiding(N, e)
    else:
        w2 = w2_formula
        w2e = w2 - (2 * q - 1)  # every element of M(q, q) lies on 2q-1 lines
    k = (r - 1) // 2
    family = w2e ** k * (ell if r % 2 == 0 else 1)
    s = r - 2
    return {
        "ell": ell,
        "r": r,
        "q": q,
        "W2": w2,
        "W2_formula": w2_formula,
        "W2e": w2e,
        "family": family,
        # W2 >= q^3/2 + 4q, doubled
        "cubic_chain": 2 * w2 >= q ** 3 + 8 * q,
        # W2 > ell^3/128 + ell + 1, times 128
        "w2_chain": 128 * w2 > ell ** 3 + 128 * (ell + 1),
        "w2e_chain": 128 * w2e > ell ** 3,
        "in_U": 2 * q - 1 <= ell + 1,
        # family >= (ell^3/128)^(s/2), squared and times 128^s
        "bound_met": 128 ** s * family * family >= ell ** (3 * s),
    }


def check_corollary_bound(ell: int, r: int, enumerate_lines: bool = True) -> bool:
    d = corollary_numbers(ell, r, enumerate_lines)
    return (
        d["W2"] == d["W2_formula"]
        and d["cubic_chain"]
        and d["w2_chain"]
        and d["w2e_chain"]
        and d["in_U"]
        and d["bound_met"]
    )


@dataclass
class Report:
    ell: int
    r: int
    ground_size: int
    W2: int
    W2e: int | None
    hyperplane_count: int
    count_kind: str  # "exact" or "lower_bound"
    bonin_bound: int
    max_line_minor: int
    minor_method: str
    in_U: bool
    beats_bound: bool
    kung_ok: bool
    family_size: int | None = None
    family_checked: int | None = None
    provenance: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.in_U and self.beats_bound

    def to_dict(self) -> dict:
        return asdict(self)


def _component_line_minor(tower: TowerSpec) -> int:
    # a U_{2,n}-minor of a parallel connection is a minor of one side
    best = max_rank2_minor_points(tower.base)
    if tower.attachment is not None:
        best = max(best, max_rank2_minor_points(Uniform(2, tower.ell + 1)))
    return best


def _check_family_member(M: Matroid, H: int, r: int, index: int):
    if M.rank(H) != r - 1:
        raise VerificationFailed("family_rank", f"member {index} has rank {M.rank(H)}, expected {r - 1}")
    if M.closure(H) != H:
        raise VerificationFailed("family_closed", f"member {index} is not a flat")


def verify_family(
    M: Matroid,
    tower: TowerSpec,
    sample: int | None = DEFAULT_SAMPLE,
    seed: int = 0,
) -> tuple[int, int]:
    """Check the lower-bound family; returns (distinct count, members verified).

    ``sample=None`` verifies every member.
    """
    size = family_size(tower)
    if size <= DISTINCT_ENUMERATION_LIMIT:
        distinct = len(set(lower_bound_family(tower)))
    else:
        # members are determined by their per-copy traces
        if len(set(tower.avoiding)) != len(tower.avoiding):
            raise VerificationFailed("family_distinct", "repeated base line")
        distinct = size
    if distinct != size:
        raise VerificationFailed("family_distinct", f"{distinct} distinct of {size}")

    if sample is None or size <= sample:
        for i, H in enumerate(lower_bound_family(tower)):
            _check_family_member(M, H, tower.r, i)
        return distinct, size
    picks = sorted(random.Random(seed).sample(range(size), sample))
    for i in picks:
        _check_family_member(M, family_member(tower, i), tower.r, i)
    return distinct, len(picks)


def verify_counterexample(
    M: Matroid,
    ell: int,
    mode: str = "exact",
    tower: TowerSpec | None = None,
    sample: int | None = DEFAULT_SAMPLE,
    seed: int = 0,
    workers: int = 1,
) -> Report:
    """Count hyperplanes (or a verified lower bound) and decide membership in U(ell).

    ``mode="exact"`` enumerates every hyperplane and finds the longest line
    minor by cover counting.  ``mode="family_only"`` verifies the explicit
    hyperplane family of ``tower`` and takes the longest line minor over the
    glued pieces.
    """
    if mode not in ("exact", "family_only"):
        raise ValueError(f"unknown mode {mode!r}")
    r = M.full_rank
    if tower is not None and r != tower.r:
        raise VerificationFailed("tower_rank", f"rank {r}, expected {tower.r}")
    bound = bonin_bound(ell, r)

    base = tower.base if tower is not None else M
    W2 = count_lines(base)
    W2e = count_lines_avoiding(base, tower.e) if tower is not None else None

    fam_size = fam_checked = None
    if mode == "exact":
        H = hyperplanes(M, workers)
        count = len(H)
        if tower is not None:
            fam_size = family_size(tower)
            hset = {F.elements for F in H}
            fam = set(lower_bound_family(tower))
            if len(fam) != fam_size:
                raise VerificationFailed("family_distinct", f"{len(fam)} distinct of {fam_size}")
            if not fam <= hset:
                raise VerificationFailed("family_closed", "a family member is not a hyperplane")
            fam_checked = fam_size
        max_minor = max_rank2_minor_points(M, workers)
        method = "cover_count"
        kind = "exact"
    else:
        if tower is None:
            raise ValueError("family_only mode needs the tower witness")
        count, fam_checked = verify_family(M, tower, sample, seed)
        fam_size = count
        max_minor = _component_line_minor(tower)
        method = "components"
        kind = "lower_bound"

    points = len(flats_by_rank(M, 1))
    report = Report(
        ell=ell,
        r=r,
        ground_size=M.n,
        W2=W2,
        W2e=W2e,
        hyperplane_count=count,
        count_kind=kind,
        bonin_bound=bound,
        max_line_minor=max_minor,
        minor_method=method,
        in_U=max_minor <= ell + 1,
        beats_bound=count > bound,
        kung_ok=points <= bound,
        family_size=fam_size,
        family_checked=fam_checked,
    )
    if tower is not None:
        report.witness["tower"] = tower.to_dict()
    log.info("ell=%d r=%d: %s %d vs bound %d", ell, r, kind, count, bound)
    return report
