"""Finite metric spaces with validated distance matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .maxplus import as_value_array


class SpaceValidationError(ValueError):
    """A metric axiom failed; carries the axiom name and witness indices."""

    def __init__(self, axiom: str, where: tuple, message: str):
        super().__init__(message)
        self.axiom = axiom
        self.where = where


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Ordered point labels plus a distance matrix satisfying the axioms.

    Build instances through :func:`validate_space`; the constructor
    assumes the matrix has already been checked.
    """

    points: tuple[str, ...]
    rho: np.ndarray
    _index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self.rho.setflags(write=False)
        self._index.update({p: i for i, p in enumerate(self.points)})

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown point {label!r}") from None

    def distance(self, a: str, b: str) -> float:
        return float(self.rho[self.index(a), self.index(b)])


def validate_space(points, rho) -> FiniteMetricSpace:
    """Check the metric axioms and return the validated space.

    Raises SpaceValidationError naming the violated axiom together with
    the offending indices.  All comparisons are exact: a distance matrix
    is either a metric or it is not.
    """
    pts = tuple(str(p) for p in points)
    if not pts:
        raise SpaceValidationError("nonempty", (), "a space needs at least one point")
    seen = {}
    for i, p in enumerate(pts):
        if p in seen:
            raise SpaceValidationError(
                "distinct-labels", (seen[p], i), f"duplicate point label {p!r} at positions {seen[p]} and {i}"
            )
        seen[p] = i

    mat = as_value_array(rho, "distances").copy()
    n = len(pts)
    if mat.shape != (n, n):
        raise SpaceValidationError(
            "shape", mat.shape, f"distance matrix must be {n}x{n}, got {mat.shape}"
        )
    if not np.isfinite(mat).all():
        i, j = np.argwhere(~np.isfinite(mat))[0]
        raise SpaceValidationError(
            "finite", (int(i), int(j)), f"rho[{i},{j}] is not finite"
        )

    for i in range(n):
        if mat[i, i] != 0.0:
            raise SpaceValidationError(
                "zero-diagonal", (i,), f"rho[{i},{i}] = {mat[i, i]} but self-distance must be 0"
            )
    for i in range(n):
        for j in range(i + 1, n):
            if mat[i, j] != mat[j, i]:
                raise SpaceValidationError(
                    "symmetry",
                    (i, j),
                    f"rho[{i},{j}] = {mat[i, j]} differs from rho[{j},{i}] = {mat[j, i]}",
                )
            if mat[i, j] < 0.0:
                raise SpaceValidationError(
                    "nonnegative", (i, j), f"rho[{i},{j}] = {mat[i, j]} is negative"
                )
            if mat[i, j] == 0.0:
                raise SpaceValidationError(
                    "separation",
                    (i, j),
                    f"distinct points {pts[i]!r} and {pts[j]!r} are at distance 0",
                )
    for j in range(n):
        for i in range(n):
            if i == j:
                continue
            for k in range(n):
                if k == i or k == j:
                    continue
                if mat[i, k] > mat[i, j] + mat[j, k]:
                    raise SpaceValidationError(
                        "triangle",
                        (i, j, k),
                        f"rho[{i},{k}] = {mat[i, k]} exceeds rho[{i},{j}] + rho[{j},{k}] = {mat[i, j] + mat[j, k]}",
                    )

    return FiniteMetricSpace(pts, mat)


def diam(space: FiniteMetricSpace) -> float:
    """Largest pairwise distance."""
    return float(space.rho.max())


def diametral_pair(space: FiniteMetricSpace) -> tuple[str, str]:
    """First pair of points (in order) realising the diameter."""
    i, j = np.unravel_index(int(np.argmax(space.rho)), space.rho.shape)
    return space.points[int(i)], space.points[int(j)]


def same_space(a: FiniteMetricSpace, b: FiniteMetricSpace) -> bool:
    return a is b or (a.points == b.points and np.array_equal(a.rho, b.rho))


def require_same_space(a: FiniteMetricSpace, b: FiniteMetricSpace, what: str = "arguments"):
    if not same_space(a, b):
        raise ValueError(f"{what} live on different spaces")
