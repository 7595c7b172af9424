"""Seeded random instances for the property suites and the selftest.

Everything is sampled on a quarter-integer grid: distances are multiples
of 0.25 in [0.25, 4] closed under shortest paths, densities are
multiples of 0.25 in [-5, 0].  Sums and differences of such numbers are
exact in doubles, so metric axioms, marginal equalities and distance
values can be compared without tolerances.
"""

from __future__ import annotations

import numpy as np

from .maxplus import NEG_INF
from .measures import IdempotentMeasure, TestFunction
from .spaces import FiniteMetricSpace, validate_space

_LABELS = "abcdefghijklmnopqrstuvwxyz"


def random_space(rng, n: int) -> FiniteMetricSpace:
    """Random n-point metric: quarter-grid edge lengths, shortest-path closure."""
    if not 1 <= n <= len(_LABELS):
        raise ValueError(f"cannot label a space of {n} points")
    rho = 0.25 * rng.integers(1, 17, size=(n, n)).astype(float)
    rho = np.minimum(rho, rho.T)
    np.fill_diagonal(rho, 0.0)
    for k in range(n):  # closure keeps the grid: sums of quarter-integers are exact
        rho = np.minimum(rho, rho[:, k, None] + rho[None, k, :])
    return validate_space(tuple(_LABELS[:n]), rho)


def random_density(rng, n: int, neg_inf_prob: float = 0.3) -> np.ndarray:
    """Quarter-grid density vector with max exactly 0, -inf off the support."""
    vals = -0.25 * rng.integers(0, 21, size=n).astype(float)
    drop = rng.random(n) < neg_inf_prob
    keep = ~drop
    if not keep.any():
        keep[int(rng.integers(0, n))] = True
    vals[~keep] = NEG_INF
    vals[keep] -= vals[keep].max()
    return vals


def random_measure(rng, space: FiniteMetricSpace, neg_inf_prob: float = 0.3) -> IdempotentMeasure:
    return IdempotentMeasure(space, random_density(rng, space.n, neg_inf_prob))


def random_test_function(rng, space: FiniteMetricSpace, neg_inf_prob: float = 0.15) -> TestFunction:
    vals = 0.25 * rng.integers(-16, 17, size=space.n).astype(float)
    vals[rng.random(space.n) < neg_inf_prob] = NEG_INF
    return TestFunction(space, vals)


def random_point_map(rng, source: FiniteMetricSpace, target: FiniteMetricSpace) -> dict[str, str]:
    return {p: target.points[int(rng.integers(0, target.n))] for p in source.points}


def perturbed_measure(rng, mu: IdempotentMeasure, scale: float) -> IdempotentMeasure:
    """Nudge non-mode finite densities down by quarter-fractions of scale.

    Keeps the support, the grid exactness and the normalisation; the
    sup-gap from mu is at most scale.
    """
    vals = mu.density.copy()
    mode = int(np.argmax(vals))
    for i in range(len(vals)):
        if i != mode and vals[i] > NEG_INF:
            vals[i] -= (scale / 4.0) * int(rng.integers(0, 5))
    return IdempotentMeasure(mu.space, vals)


def convergent_sequence(rng, space: FiniteMetricSpace, length: int = 32, settle_by: int = 8):
    """Terms that perturb the limit at geometric scale 2^-(i+2), then equal it.

    Early terms may also flip one point in or out of the support; from
    ``settle_by`` on every term is the limit itself, densities and
    support alike.
    """
    from .convergence import MeasureSequence

    limit = random_measure(rng, space)
    terms = []
    for i in range(length):
        if i >= settle_by:
            terms.append(limit)
            continue
        term = perturbed_measure(rng, limit, 2.0 ** -(i + 2))
        if space.n > 1 and rng.random() < 0.25:
            vals = term.density.copy()
            mode = int(np.argmax(vals))
            j = int(rng.integers(0, space.n))
            if j != mode:
                vals[j] = NEG_INF if vals[j] > NEG_INF else -0.25 * int(rng.integers(0, 21))
            term = IdempotentMeasure(space, vals)
        terms.append(term)
    return MeasureSequence(tuple(terms), limit)


def divergent_sequence(rng, space: FiniteMetricSpace, length: int = 32):
    """Terms whose densities stay at least 0.5 away from the limit, always.

    One non-mode point carries the defect: stuck below its limit value,
    flapping in and out of the support, or oscillating between two
    wrong values.  Every term differs from the limit at that point.
    """
    from .convergence import MeasureSequence

    if space.n < 2:
        raise ValueError("a one-point space has only one measure; nothing can diverge")
    limit = random_measure(rng, space)
    mode = int(np.argmax(limit.density))
    others = [k for k in range(space.n) if k != mode]
    j = others[int(rng.integers(0, len(others)))]
    base = float(limit.density[j]) if limit.density[j] > NEG_INF else 0.0
    style = int(rng.integers(0, 3))

    def defective(i: int) -> IdempotentMeasure:
        vals = limit.density.copy()
        if style == 0:  # stuck half a step below its limit
            vals[j] = base - 0.5
        elif style == 1:  # support never settles
            vals[j] = NEG_INF if i % 2 == 0 else base - 0.5
            if limit.density[j] == NEG_INF and i % 2 == 0:
                vals[j] = base - 1.0
        else:  # value keeps oscillating
            vals[j] = base - 0.5 if i % 2 else base - 1.0
        return IdempotentMeasure(space, vals)

    terms = tuple(defective(i) for i in range(length))
    seq = MeasureSequence(terms, limit)
    assert all(g >= 0.5 for g in _sequence_gaps(seq)), "defect fell below the floor"
    return seq


def _sequence_gaps(seq) -> list[float]:
    from .convergence import density_gap

    return [density_gap(t, seq.limit) for t in seq.terms]
