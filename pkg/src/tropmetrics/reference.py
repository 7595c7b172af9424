"""Hand-checked reference instances used by the selftest and the tests.

Each builder returns fresh objects; expected values were worked out on
paper and double-checked against the enumeration oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .couplings import Coupling
from .maxplus import NEG_INF
from .measures import IdempotentMeasure
from .spaces import FiniteMetricSpace, validate_space


@dataclass(frozen=True, eq=False)
class TwoPointInstance:
    """Two measures on a two-point space at distance one.

    The handmade coupling pushes the off-mode mass across the gap at
    depths that cancel the distance, so the transport cost is 0 even
    though the measures differ: transport distance 0, bottleneck
    distance 1.  The standing witness that only the bottleneck distance
    separates points.
    """

    space: FiniteMetricSpace
    mu1: IdempotentMeasure
    mu2: IdempotentMeasure
    coupling: Coupling
    transport: float = 0.0
    bottleneck: float = 1.0


def two_point_instance() -> TwoPointInstance:
    space = validate_space(("x", "y"), [[0.0, 1.0], [1.0, 0.0]])
    mu1 = IdempotentMeasure(space, np.array([0.0, -2.0]))
    mu2 = IdempotentMeasure(space, np.array([0.0, -4.0]))
    gamma = np.array([[0.0, -4.0], [-2.0, NEG_INF]])
    return TwoPointInstance(space, mu1, mu2, Coupling(mu1, mu2, gamma))


@dataclass(frozen=True, eq=False)
class TriangleGapInstance:
    """Three measures on a path space where the transport distance jumps.

    Both legs cost 0: each off-mode point finds a same-or-higher density
    partner one step away, deep enough that density plus distance stays
    non-positive.  The direct pair has no such stepping stone, so its
    off-mode mass at -1 must travel distance 2 and the cost is 1.  The
    triangle inequality fails: 1 > 0 + 0.
    """

    space: FiniteMetricSpace
    mu1: IdempotentMeasure
    mu2: IdempotentMeasure
    mu3: IdempotentMeasure
    leg12: float = 0.0
    leg23: float = 0.0
    direct13: float = 1.0


def triangle_gap_instance() -> TriangleGapInstance:
    space = validate_space(
        ("a", "b", "c"),
        [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]],
    )
    mu1 = IdempotentMeasure(space, np.array([0.0, -9.0, -1.0]))
    mu2 = IdempotentMeasure(space, np.array([0.0, -1.0, -9.0]))
    mu3 = IdempotentMeasure(space, np.array([0.0, -9.0, -9.0]))
    return TriangleGapInstance(space, mu1, mu2, mu3)


@dataclass(frozen=True, eq=False)
class StrictGapInstance:
    """transport 0 < bottleneck 1: a tail of mass with nowhere close to go."""

    space: FiniteMetricSpace
    mu1: IdempotentMeasure
    mu2: IdempotentMeasure
    transport: float = 0.0
    bottleneck: float = 1.0


def strict_gap_instance() -> StrictGapInstance:
    space = validate_space(("a", "b"), [[0.0, 1.0], [1.0, 0.0]])
    mu1 = IdempotentMeasure(space, np.array([0.0, -3.0]))
    mu2 = IdempotentMeasure(space, np.array([0.0, NEG_INF]))
    return StrictGapInstance(space, mu1, mu2)


def harmonic_pair(n: int) -> tuple[IdempotentMeasure, IdempotentMeasure]:
    """(0, -1/n) against (0, 0) on the two-point space.

    Densities converge as n grows, yet every admissible coupling must
    witness the limit's second mode from the term's single mode across
    the gap: the bottleneck distance stays 1 for every n.  The standing
    example that bottleneck convergence demands eventual equality."""
    space = validate_space(("x", "y"), [[0.0, 1.0], [1.0, 0.0]])
    term = IdempotentMeasure(space, np.array([0.0, -1.0 / n]))
    limit = IdempotentMeasure(space, np.array([0.0, 0.0]))
    return term, limit
