"""Operational convergence checks for sequences of idempotent measures.

A sequence "converges" against an epsilon schedule when, for every
level ε_k, the tail of the sequence beyond that level's index budget
stays within ε_k.  Three gap notions are compared:

  * pointwise: the worst evaluation gap over a separating family of
    test functions (max-plus singleton indicators by default, which on a
    finite space is exactly the density sup-gap; -inf entries must match
    on the tail, since a finite-vs--inf gap counts as +inf);
  * metric: the bottleneck distance of each term from the limit;
  * transport: the transport distance, which fails separation and is
    kept around precisely to show where it disagrees.

Neighbourhoods of a measure come in two shapes: prebase sets (one test
function, one tolerance) and cover neighbourhoods (a family of sets
covering the support, with density agreement inside each set).

``confined_coupling`` asks for an admissible coupling supported inside a
given set of pairs.  Feasibility reduces to a partner condition per
support row and column; when a row or column has no partner inside the
allowed pairs, the failure names it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .couplings import Coupling
from .distances import bottleneck_distance_fast, transport_distance_fast
from .maxplus import NEG_INF, as_value
from .measures import IdempotentMeasure, TestFunction, evaluate, support, support_indices
from .spaces import FiniteMetricSpace, require_same_space


def value_gap(a: float, b: float) -> float:
    """|a - b| extended to -inf: equal -inf means gap 0, mixed means +inf."""
    if a == NEG_INF and b == NEG_INF:
        return 0.0
    if a == NEG_INF or b == NEG_INF:
        return float("inf")
    return abs(a - b)


def density_gap(mu: IdempotentMeasure, nu: IdempotentMeasure) -> float:
    """Worst per-point density gap; +inf when the supports differ."""
    require_same_space(mu.space, nu.space, "measures")
    return max(value_gap(float(a), float(b)) for a, b in zip(mu.density, nu.density))


def in_prebase(nu: IdempotentMeasure, center: IdempotentMeasure, phi: TestFunction, epsilon) -> bool:
    """|ν(φ) - μ(φ)| < ε, with the -inf convention of value_gap."""
    epsilon = as_value(epsilon)
    return value_gap(evaluate(nu, phi), evaluate(center, phi)) < epsilon


@dataclass(frozen=True, eq=False)
class CoverNeighborhood:
    """A cover of the center's support plus a density tolerance."""

    center: IdempotentMeasure
    cover: tuple[frozenset, ...]
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "cover", tuple(frozenset(u) for u in self.cover))
        if not self.cover:
            raise ValueError("cover must contain at least one set")
        if not self.epsilon > 0:
            raise ValueError(f"tolerance must be positive, got {self.epsilon}")
        pts = set(self.center.space.points)
        supp = set(support(self.center))
        covered = set()
        for k, u in enumerate(self.cover):
            if not u:
                raise ValueError(f"cover set {k} is empty")
            unknown = u - pts
            if unknown:
                raise ValueError(f"cover set {k} contains unknown points {sorted(unknown)}")
            if not (u & supp):
                raise ValueError(f"cover set {k} misses the support of the center")
            covered |= u
        if not supp <= covered:
            raise ValueError(f"support points {sorted(supp - covered)} are not covered")


def in_cover_neighborhood(nu: IdempotentMeasure, nbhd: CoverNeighborhood) -> bool:
    """Support meets every set, lies in the union, and densities agree within ε
    across every (center point, ν point) pair inside each set."""
    center = nbhd.center
    require_same_space(nu.space, center.space, "measures")
    supp_nu = set(support(nu))
    union = set()
    for u in nbhd.cover:
        if not (u & supp_nu):
            return False
        union |= u
    if not supp_nu <= union:
        return False
    for u in nbhd.cover:
        for x in u & set(support(center)):
            for y in u & supp_nu:
                if abs(center.density_at(x) - nu.density_at(y)) >= nbhd.epsilon:
                    return False
    return True


def singleton_cover(center: IdempotentMeasure, epsilon) -> CoverNeighborhood:
    """One singleton per support point: the finest cover neighbourhood."""
    return CoverNeighborhood(center, tuple(frozenset([p]) for p in support(center)), float(epsilon))


def cover_for_function(center: IdempotentMeasure, phi: TestFunction, epsilon) -> CoverNeighborhood:
    """Cover by φ-variation windows, sized so that membership at tolerance ε/2
    pins evaluation gaps below ε (each set has φ-spread < ε/2)."""
    require_same_space(center.space, phi.space, "measure and function")
    epsilon = as_value(epsilon)
    if not epsilon > 0:
        raise ValueError(f"tolerance must be positive, got {epsilon}")
    if not np.isfinite(phi.values).all():
        raise ValueError("modulus covers need a finite function")
    sets = []
    for x in support(center):
        fx = phi.value_at(x)
        window = frozenset(
            p for p in center.space.points if abs(phi.value_at(p) - fx) < epsilon / 4
        )
        if window not in sets:
            sets.append(window)
    return CoverNeighborhood(center, tuple(sets), epsilon / 2)


@dataclass(frozen=True)
class EpsilonSchedule:
    """Geometric tolerance levels with per-level index budgets.

    Level k (0-based) demands gap < levels[k] for every term from index
    start + (k + 1) * per_level on.  A sequence too short to reach a
    level's budget fails that level: convergence must be demonstrated,
    not presumed.
    """

    levels: tuple[float, ...] = tuple(2.0 ** -k for k in range(1, 21))
    start: int = 8
    per_level: int = 1

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(float(e) for e in self.levels))
        if not self.levels or any(e <= 0 for e in self.levels):
            raise ValueError("levels must be positive")
        if any(b > a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be non-increasing")
        if self.start < 0 or self.per_level < 1:
            raise ValueError("budgets must move forward")

    def budget(self, k: int) -> int:
        return self.start + (k + 1) * self.per_level

    def met(self, gaps) -> bool:
        gaps = list(gaps)
        for k, eps in enumerate(self.levels):
            b = self.budget(k)
            if b >= len(gaps):
                return False
            if any(not g < eps for g in gaps[b:]):
                return False
        return True


@dataclass(frozen=True, eq=False)
class MeasureSequence:
    terms: tuple[IdempotentMeasure, ...]
    limit: IdempotentMeasure

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a sequence needs at least one term")
        for t in self.terms:
            require_same_space(t.space, self.limit.space, "sequence terms")

    @property
    def space(self) -> FiniteMetricSpace:
        return self.limit.space


def pointwise_gaps(seq: MeasureSequence, extra_functions=()) -> list[float]:
    """Per-term worst gap over singleton indicators plus any extra functions."""
    gaps = []
    for term in seq.terms:
        g = density_gap(term, seq.limit)
        for phi in extra_functions:
            g = max(g, value_gap(evaluate(term, phi), evaluate(seq.limit, phi)))
        gaps.append(g)
    return gaps


def metric_gaps(seq: MeasureSequence) -> list[float]:
    return [bottleneck_distance_fast(t, seq.limit).value for t in seq.terms]


def transport_gaps(seq: MeasureSequence) -> list[float]:
    return [transport_distance_fast(t, seq.limit).value for t in seq.terms]


def pointwise_converges(seq: MeasureSequence, schedule: EpsilonSchedule | None = None, extra_functions=()) -> bool:
    schedule = schedule or EpsilonSchedule()
    return schedule.met(pointwise_gaps(seq, extra_functions))


def metric_converges(seq: MeasureSequence, schedule: EpsilonSchedule | None = None) -> bool:
    schedule = schedule or EpsilonSchedule()
    return schedule.met(metric_gaps(seq))


def transport_converges(seq: MeasureSequence, schedule: EpsilonSchedule | None = None) -> bool:
    schedule = schedule or EpsilonSchedule()
    return schedule.met(transport_gaps(seq))


def convergence_table(seq: MeasureSequence, extra_functions=()) -> list[tuple[int, float, float, float]]:
    """Rows of (index, bottleneck gap, transport gap, pointwise gap)."""
    pw = pointwise_gaps(seq, extra_functions)
    bt = metric_gaps(seq)
    tr = transport_gaps(seq)
    return [(i, bt[i], tr[i], pw[i]) for i in range(len(seq.terms))]


class InfeasibleNeighborhoodError(ValueError):
    """No admissible coupling fits inside the allowed pairs."""

    def __init__(self, side: str, label: str, message: str):
        super().__init__(message)
        self.side = side
        self.label = label


def diagonal_pairs(space: FiniteMetricSpace) -> frozenset:
    return frozenset((p, p) for p in space.points)


def ball_pairs(space: FiniteMetricSpace, radius: float) -> frozenset:
    """All pairs closer than radius; contains the diagonal for radius > 0."""
    radius = as_value(radius)
    return frozenset(
        (p, q)
        for i, p in enumerate(space.points)
        for j, q in enumerate(space.points)
        if space.rho[i, j] < radius
    )


def confined_coupling(mu0: IdempotentMeasure, mu1: IdempotentMeasure, allowed) -> Coupling:
    """An admissible coupling of (μ₀, μ₁) supported inside ``allowed``.

    ``allowed`` is a set of point pairs that must contain the diagonal.
    Every support row needs an allowed partner of no smaller density on
    the other side, and dually for columns; the chosen partners (nearest
    first, then point order) assemble into a witness coupling.  When a
    row or column has no partner the error names it.
    """
    require_same_space(mu0.space, mu1.space, "measures")
    space = mu0.space
    pairs = {(str(a), str(b)) for a, b in allowed}
    missing = [p for p in space.points if (p, p) not in pairs]
    if missing:
        raise ValueError(f"allowed pairs must contain the diagonal; missing {missing[0]!r}")
    lam0, lam1 = mu0.density, mu1.density
    rho = space.rho

    def pick(i, row: bool):
        mine = lam0[i] if row else lam1[i]
        options = []
        for j in range(space.n):
            pair = (space.points[i], space.points[j]) if row else (space.points[j], space.points[i])
            theirs = lam1[j] if row else lam0[j]
            if pair in pairs and theirs >= mine:
                options.append(j)
        if not options:
            where = "row" if row else "column"
            raise InfeasibleNeighborhoodError(
                where,
                space.points[i],
                f"no allowed partner for {where} {space.points[i]!r} "
                f"(density {mine}) inside the given pairs",
            )
        dists = [rho[i, j] for j in options]
        return options[int(np.argmin(dists))]

    gamma = np.full((space.n, space.n), NEG_INF)
    for i in support_indices(mu0):
        j = pick(i, True)
        gamma[i, j] = max(gamma[i, j], lam0[i])
    for j in support_indices(mu1):
        i = pick(j, False)
        gamma[i, j] = max(gamma[i, j], lam1[j])
    return Coupling(mu0, mu1, gamma)
