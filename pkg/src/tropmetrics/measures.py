"""Idempotent probability measures and the functions they integrate.

A measure is determined by its density vector λ: X -> [-inf, 0] with
max λ = 0.  Integration against a function φ is the max-plus pairing

    μ(φ) = ⊕_x λ(x) ⊙ φ(x) = max_x (λ(x) + φ(x)),

which is normalised (μ(c) = c), ⊙-homogeneous and ⊕-additive.  The
density is recovered from the functional by evaluating the max-plus
indicator of each singleton.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .maxplus import NEG_INF, as_value, as_value_array
from .spaces import FiniteMetricSpace, require_same_space


class MeasureValidationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A function X -> R ∪ {-inf}, stored in point order."""

    space: FiniteMetricSpace
    values: np.ndarray

    def __post_init__(self):
        arr = as_value_array(self.values, "function values")
        if arr.shape != (self.space.n,):
            raise ValueError(
                f"function has {arr.shape} values for a space of {self.space.n} points"
            )
        object.__setattr__(self, "values", arr)
        arr.setflags(write=False)

    @classmethod
    def from_mapping(cls, space: FiniteMetricSpace, mapping, default=NEG_INF) -> "TestFunction":
        unknown = set(mapping) - set(space.points)
        if unknown:
            raise ValueError(f"unknown points in function mapping: {sorted(unknown)}")
        vals = [as_value(mapping.get(p, default)) for p in space.points]
        return cls(space, np.array(vals))

    @classmethod
    def constant(cls, space: FiniteMetricSpace, c) -> "TestFunction":
        return cls(space, np.full(space.n, as_value(c)))

    def value_at(self, label: str) -> float:
        return float(self.values[self.space.index(label)])


def characteristic(space: FiniteMetricSpace, subset) -> TestFunction:
    """Max-plus indicator: 0 on the subset, -inf elsewhere."""
    members = {subset} if isinstance(subset, str) else set(subset)
    unknown = members - set(space.points)
    if unknown:
        raise ValueError(f"unknown points in subset: {sorted(unknown)}")
    vals = np.full(space.n, NEG_INF)
    for p in members:
        vals[space.index(p)] = 0.0
    return TestFunction(space, vals)


def scale(phi: TestFunction, c) -> TestFunction:
    """c ⊙ φ: shift every finite value by c."""
    c = as_value(c)
    if c == NEG_INF:
        return TestFunction(phi.space, np.full(phi.space.n, NEG_INF))
    return TestFunction(phi.space, phi.values + c)


def pointwise_max(phi: TestFunction, psi: TestFunction) -> TestFunction:
    """φ ⊕ ψ, taken pointwise."""
    require_same_space(phi.space, psi.space, "functions")
    return TestFunction(phi.space, np.maximum(phi.values, psi.values))


def step_function(space: FiniteMetricSpace, sets, levels) -> TestFunction:
    """⊕_i levels[i] ⊙ χ(sets[i]) for pairwise disjoint sets, levels ≤ 0."""
    sets = [list(s) for s in sets]
    levels = [as_value(a) for a in levels]
    if len(sets) != len(levels):
        raise ValueError(f"{len(sets)} sets but {len(levels)} levels")
    vals = np.full(space.n, NEG_INF)
    claimed: dict[int, int] = {}
    for si, (subset, level) in enumerate(zip(sets, levels)):
        if level > 0.0:
            raise ValueError(f"step level {level} is positive; levels must be ≤ 0")
        for p in subset:
            i = space.index(p)
            if i in claimed:
                raise ValueError(
                    f"point {p!r} appears in sets {claimed[i]} and {si}; sets must be disjoint"
                )
            claimed[i] = si
            vals[i] = level
    return TestFunction(space, vals)


@dataclass(frozen=True, eq=False)
class IdempotentMeasure:
    """Density vector of an idempotent probability measure."""

    space: FiniteMetricSpace
    density: np.ndarray

    def __post_init__(self):
        arr = as_value_array(self.density, "densities")
        if arr.shape != (self.space.n,):
            raise MeasureValidationError(
                f"density has shape {arr.shape} for a space of {self.space.n} points"
            )
        top = arr.max()
        if top != 0.0:
            if (arr > 0.0).any():
                bad = int(np.argmax(arr))
                raise MeasureValidationError(
                    f"density at {self.space.points[bad]!r} is {arr[bad]} > 0"
                )
            raise MeasureValidationError(
                f"density must attain 0 somewhere; maximum is {top}"
            )
        object.__setattr__(self, "density", arr)
        arr.setflags(write=False)

    @classmethod
    def from_mapping(cls, space: FiniteMetricSpace, mapping, default=NEG_INF) -> "IdempotentMeasure":
        unknown = set(mapping) - set(space.points)
        if unknown:
            raise MeasureValidationError(f"unknown points in density mapping: {sorted(unknown)}")
        vals = [as_value(mapping.get(p, default)) for p in space.points]
        return cls(space, np.array(vals))

    def density_at(self, label: str) -> float:
        return float(self.density[self.space.index(label)])

    def as_mapping(self) -> dict[str, float]:
        return {p: float(v) for p, v in zip(self.space.points, self.density)}


def dirac(space: FiniteMetricSpace, point: str) -> IdempotentMeasure:
    vals = np.full(space.n, NEG_INF)
    vals[space.index(point)] = 0.0
    return IdempotentMeasure(space, vals)


def support(mu: IdempotentMeasure) -> tuple[str, ...]:
    """Points with finite density, in point order.  Never empty."""
    return tuple(p for p, v in zip(mu.space.points, mu.density) if v > NEG_INF)


def support_indices(mu: IdempotentMeasure) -> list[int]:
    return [i for i, v in enumerate(mu.density) if v > NEG_INF]


def evaluate(mu: IdempotentMeasure, phi: TestFunction) -> float:
    """μ(φ) = max_x (λ(x) + φ(x)).  May be -inf when φ misses the support."""
    require_same_space(mu.space, phi.space, "measure and function")
    return float(np.max(mu.density + phi.values))


def density_from_functional(space: FiniteMetricSpace, functional) -> IdempotentMeasure:
    """Recover the density by probing singletons: λ(x) = functional(χ_x).

    The functional must be normalised; anything whose singleton values
    do not peak at exactly 0 is rejected.
    """
    vals = np.array([as_value(functional(characteristic(space, p))) for p in space.points])
    if vals.max() != 0.0:
        raise MeasureValidationError(
            f"functional is not normalised: singleton values peak at {vals.max()}, not 0"
        )
    return IdempotentMeasure(space, vals)


def pushforward(f, mu: IdempotentMeasure, target: FiniteMetricSpace) -> IdempotentMeasure:
    """Image measure along a point map: density(y) = max over the fibre of λ.

    f may be a mapping or a callable defined on every point of mu's space,
    with values among the target's points.
    """
    lookup = f.__getitem__ if hasattr(f, "__getitem__") else f
    vals = np.full(target.n, NEG_INF)
    for i, p in enumerate(mu.space.points):
        try:
            q = lookup(p)
        except KeyError:
            raise ValueError(f"point map is not defined at {p!r}") from None
        j = target.index(q)
        vals[j] = max(vals[j], mu.density[i])
    return IdempotentMeasure(target, vals)
