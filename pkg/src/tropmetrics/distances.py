"""Transport and bottleneck distances between idempotent measures.

Both distances minimise over admissible couplings:

  transport  (CLI name dI):    min over ξ of  max (γ + ρ)
  bottleneck (CLI name rhoI):  min over ξ of  max(ξ(ρ), max ρ over supp ξ)

The key structural fact: any admissible ξ entrywise dominates a witness
pattern, a coupling that keeps only one marginal-attaining cell per
support row and per support column (γ(x, r(x)) = λ₁(x) needs
λ₂(r(x)) ≥ λ₁(x), and dually).  Dropping dominated cells to -inf never
increases either objective, and every witness pattern is itself
admissible, so both minima are attained on the finite pattern family.
That gives an exact enumeration oracle, and collapsing the enumeration
row by row gives the closed-form fast paths.

Each solver returns a DistanceReport whose witness coupling attains the
reported value exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .couplings import Coupling, support_width, transport_cost
from .maxplus import NEG_INF
from .measures import IdempotentMeasure, support_indices
from .spaces import require_same_space


class OracleSizeError(ValueError):
    """Support product too large for exhaustive enumeration."""


@dataclass(frozen=True, eq=False)
class DistanceReport:
    value: float
    witness: Coupling
    method: str  # "fast" | "oracle"


def _partner_sets(mu1: IdempotentMeasure, mu2: IdempotentMeasure):
    """Feasible witness partners for every support row and column.

    Row x may send its mass to any y with λ₂(y) ≥ λ₁(x); column y may
    draw from any x with λ₁(x) ≥ λ₂(y).  Mode points of the other side
    always qualify, so the sets are never empty.
    """
    lam1, lam2 = mu1.density, mu2.density
    rows = support_indices(mu1)
    cols = support_indices(mu2)
    row_opts = {i: [j for j in range(len(lam2)) if lam2[j] >= lam1[i]] for i in rows}
    col_opts = {j: [i for i in range(len(lam1)) if lam1[i] >= lam2[j]] for j in cols}
    return rows, cols, row_opts, col_opts


def _pattern_witness(space, mu1, mu2, row_choice, col_choice) -> Coupling:
    gamma = np.full((space.n, space.n), NEG_INF)
    for i, j in row_choice.items():
        gamma[i, j] = max(gamma[i, j], mu1.density[i])
    for j, i in col_choice.items():
        gamma[i, j] = max(gamma[i, j], mu2.density[j])
    return Coupling(mu1, mu2, gamma)


def _guard(mu1, mu2, max_pairs):
    k = len(support_indices(mu1)) * len(support_indices(mu2))
    if k > max_pairs:
        raise OracleSizeError(
            f"support product {k} exceeds the enumeration guard {max_pairs}; "
            "use the fast method"
        )


def _enumerate(mu1: IdempotentMeasure, mu2: IdempotentMeasure, cell_score, max_pairs: int):
    """Minimise max(cell scores) over all witness patterns.

    cell_score(i, j, kind) scores the cell that realises row i's marginal
    at column j (kind='row') or column j's at row i (kind='col').  Scores
    for one pattern combine by max; the minimum over patterns and the
    lexicographically first minimiser are returned.
    """
    space = mu1.space
    rows, cols, row_opts, col_opts = _partner_sets(mu1, mu2)

    row_assignments = list(itertools.product(*(row_opts[i] for i in rows)))
    col_assignments = list(itertools.product(*(col_opts[j] for j in cols)))
    row_scores = np.array(
        [
            max((cell_score(i, j, "row") for i, j in zip(rows, pick)), default=0.0)
            for pick in row_assignments
        ]
    )
    col_scores = np.array(
        [
            max((cell_score(c, j, "col") for j, c in zip(cols, pick)), default=0.0)
            for pick in col_assignments
        ]
    )
    # every (row pattern, column pattern) pair, scored by the max of the parts
    table = np.maximum(row_scores[:, None], col_scores[None, :])
    flat = int(np.argmin(table))
    ri, ci = np.unravel_index(flat, table.shape)
    value = float(table[ri, ci])
    row_choice = dict(zip(rows, row_assignments[int(ri)]))
    col_choice = dict(zip(cols, col_assignments[int(ci)]))
    witness = _pattern_witness(space, mu1, mu2, row_choice, col_choice)
    return value, witness


def transport_distance_oracle(
    mu1: IdempotentMeasure, mu2: IdempotentMeasure, max_pairs: int = 16
) -> DistanceReport:
    """Exhaustive minimum of the transport cost over witness patterns."""
    require_same_space(mu1.space, mu2.space, "measures")
    _guard(mu1, mu2, max_pairs)
    rho = mu1.space.rho
    lam1, lam2 = mu1.density, mu2.density

    def score(i, j, kind):
        mass = lam1[i] if kind == "row" else lam2[j]
        return mass + rho[i, j]

    value, witness = _enumerate(mu1, mu2, score, max_pairs)
    return DistanceReport(value, witness, "oracle")


def bottleneck_distance_oracle(
    mu1: IdempotentMeasure, mu2: IdempotentMeasure, max_pairs: int = 16
) -> DistanceReport:
    """Exhaustive minimum of the support width over witness patterns."""
    require_same_space(mu1.space, mu2.space, "measures")
    _guard(mu1, mu2, max_pairs)
    rho = mu1.space.rho
    lam1, lam2 = mu1.density, mu2.density

    def score(i, j, kind):
        mass = lam1[i] if kind == "row" else lam2[j]
        # the width a single support cell commits the coupling to
        return max(mass + rho[i, j], rho[i, j])

    value, witness = _enumerate(mu1, mu2, score, max_pairs)
    return DistanceReport(value, witness, "oracle")


def transport_distance_fast(mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> DistanceReport:
    """Closed form: rows and columns decouple, each picks its cheapest partner.

    value = max( max_x min_{λ₂(y) ≥ λ₁(x)} λ₁(x) + ρ(x,y),
                 max_y min_{λ₁(x) ≥ λ₂(y)} λ₂(y) + ρ(x,y) )
    """
    require_same_space(mu1.space, mu2.space, "measures")
    rho = mu1.space.rho
    lam1, lam2 = mu1.density, mu2.density
    rows, cols, row_opts, col_opts = _partner_sets(mu1, mu2)

    value = 0.0
    row_choice, col_choice = {}, {}
    for i in rows:
        opts = row_opts[i]
        costs = [lam1[i] + rho[i, j] for j in opts]
        k = int(np.argmin(costs))
        row_choice[i] = opts[k]
        value = max(value, costs[k])
    for j in cols:
        opts = col_opts[j]
        costs = [lam2[j] + rho[i, j] for i in opts]
        k = int(np.argmin(costs))
        col_choice[j] = opts[k]
        value = max(value, costs[k])

    witness = _pattern_witness(mu1.space, mu1, mu2, row_choice, col_choice)
    assert transport_cost(witness) == value
    return DistanceReport(float(value), witness, "fast")


def bottleneck_distance_fast(mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> DistanceReport:
    """Threshold search: the answer is the smallest distance t such that
    every support row and column finds a partner within t.

    Feasibility is monotone in t and the optimum is realised by a support
    pair of the witness, so binary search over the sorted distinct
    distances is exact.
    """
    require_same_space(mu1.space, mu2.space, "measures")
    rho = mu1.space.rho
    lam1, lam2 = mu1.density, mu2.density
    rows, cols, row_opts, col_opts = _partner_sets(mu1, mu2)

    def feasible(t: float) -> bool:
        for i in rows:
            if not any(rho[i, j] <= t for j in row_opts[i]):
                return False
        for j in cols:
            if not any(rho[i, j] <= t for i in col_opts[j]):
                return False
        return True

    candidates = np.unique(rho)  # sorted, starts at 0
    lo, hi = 0, len(candidates) - 1
    while lo < hi:  # smallest feasible threshold; feasible(diam) always holds
        mid = (lo + hi) // 2
        if feasible(float(candidates[mid])):
            hi = mid
        else:
            lo = mid + 1
    t = float(candidates[lo])

    def nearest(options, i, transpose):
        dists = [rho[j, i] if transpose else rho[i, j] for j in options]
        pick = int(np.argmin(dists))  # ties fall to point order
        return options[pick]

    row_choice = {i: nearest([j for j in row_opts[i] if rho[i, j] <= t], i, False) for i in rows}
    col_choice = {j: nearest([i for i in col_opts[j] if rho[i, j] <= t], j, True) for j in cols}
    witness = _pattern_witness(mu1.space, mu1, mu2, row_choice, col_choice)
    assert support_width(witness) == t
    return DistanceReport(t, witness, "fast")


_FAST = {"dI": transport_distance_fast, "rhoI": bottleneck_distance_fast}
_ORACLE = {"dI": transport_distance_oracle, "rhoI": bottleneck_distance_oracle}


def distance(metric: str, method: str, mu1, mu2, max_pairs: int = 16) -> DistanceReport:
    """Dispatch helper used by the CLI: metric in {dI, rhoI}, method in {fast, oracle}."""
    try:
        table = {"fast": _FAST, "oracle": _ORACLE}[method]
        fn = table[metric]
    except KeyError:
        raise ValueError(f"unknown metric/method combination {metric!r}/{method!r}") from None
    if method == "oracle":
        return fn(mu1, mu2, max_pairs=max_pairs)
    return fn(mu1, mu2)
