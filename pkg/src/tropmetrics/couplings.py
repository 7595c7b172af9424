"""Admissible couplings of idempotent measure pairs, and their algebra.

A coupling of (μ₁, μ₂) is a density γ on X×X whose tropical marginals
reproduce the two input densities exactly:

    max_y γ(x, y) = λ₁(x)        max_x γ(x, y) = λ₂(y).

Entrywise this forces γ(x, y) ≤ min(λ₁(x), λ₂(y)).  Two canonical
couplings always exist: the cross coupling (all mass routed through one
mode point of each measure) and the tensor coupling γ = λ₁ ⊙ λ₂.
Couplings over a common middle measure glue along the min into a density
on X³ whose outer projection couples the outer pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .maxplus import NEG_INF, as_value_array
from .measures import IdempotentMeasure, support_indices
from .spaces import require_same_space


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of a marginal check; falsy when some marginal is off."""

    ok: bool
    side: str | None = None
    label: str | None = None
    expected: float | None = None
    actual: float | None = None

    def __bool__(self) -> bool:
        return self.ok

    @property
    def message(self) -> str:
        if self.ok:
            return "admissible"
        return (
            f"{self.side} marginal at {self.label!r} is {self.actual}, "
            f"expected {self.expected}"
        )


class InadmissibleCouplingError(ValueError):
    def __init__(self, report: AdmissibilityReport):
        super().__init__(report.message)
        self.report = report


def check_admissible(gamma, mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> AdmissibilityReport:
    """Exact check of both tropical marginal equalities.

    Values are compared bitwise: admissible couplings are built by
    copying (or ⊕-combining) density entries, so nothing is lost to
    rounding and nothing is forgiven.
    """
    require_same_space(mu1.space, mu2.space, "measures")
    space = mu1.space
    arr = as_value_array(gamma, "coupling entries")
    if arr.shape != (space.n, space.n):
        raise ValueError(f"coupling must be {space.n}x{space.n}, got {arr.shape}")
    row = arr.max(axis=1)
    for i in range(space.n):
        if row[i] != mu1.density[i]:
            return AdmissibilityReport(
                False, "row", space.points[i], float(mu1.density[i]), float(row[i])
            )
    col = arr.max(axis=0)
    for j in range(space.n):
        if col[j] != mu2.density[j]:
            return AdmissibilityReport(
                False, "column", space.points[j], float(mu2.density[j]), float(col[j])
            )
    return AdmissibilityReport(True)


@dataclass(frozen=True, eq=False)
class Coupling:
    """A validated coupling; construction re-checks the marginals."""

    left: IdempotentMeasure
    right: IdempotentMeasure
    gamma: np.ndarray

    def __post_init__(self):
        arr = as_value_array(self.gamma, "coupling entries")
        object.__setattr__(self, "gamma", arr)
        report = check_admissible(arr, self.left, self.right)
        if not report:
            raise InadmissibleCouplingError(report)
        arr.setflags(write=False)

    @property
    def space(self):
        return self.left.space

    def support_pairs(self) -> list[tuple[str, str]]:
        pts = self.space.points
        return [
            (pts[i], pts[j])
            for i, j in np.argwhere(self.gamma > NEG_INF)
        ]


def entrywise_bound(mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> np.ndarray:
    """min(λ₁(x), λ₂(y)): the ceiling every admissible coupling obeys."""
    return np.minimum(mu1.density[:, None], mu2.density[None, :])


def cross_coupling(mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> Coupling:
    """Route all mass through the first mode point of each measure.

    With x₀, y₀ the first points (in point order) of density 0, the
    coupling puts 0 at (x₀, y₀), the whole of λ₂ along row x₀, the whole
    of λ₁ along column y₀, and -inf elsewhere.
    """
    require_same_space(mu1.space, mu2.space, "measures")
    n = mu1.space.n
    i0 = int(np.argmax(mu1.density == 0.0))
    j0 = int(np.argmax(mu2.density == 0.0))
    gamma = np.full((n, n), NEG_INF)
    gamma[i0, :] = mu2.density
    gamma[:, j0] = mu1.density
    gamma[i0, j0] = 0.0
    return Coupling(mu1, mu2, gamma)


def tensor_coupling(mu1: IdempotentMeasure, mu2: IdempotentMeasure) -> Coupling:
    """γ(x, y) = λ₁(x) ⊙ λ₂(y); admissible because both densities peak at 0."""
    require_same_space(mu1.space, mu2.space, "measures")
    return Coupling(mu1, mu2, mu1.density[:, None] + mu2.density[None, :])


def transport_cost(xi: Coupling) -> float:
    """max over X×X of γ(x, y) + ρ(x, y).  Always ≥ 0."""
    return float(np.max(xi.gamma + xi.space.rho))


def support_width(xi: Coupling) -> float:
    """max over the support of (transport cost ⊕ ρ); the reach of the coupling."""
    cost = transport_cost(xi)
    supp = xi.gamma > NEG_INF
    return float(np.maximum(cost, xi.space.rho[supp]).max())


@dataclass(frozen=True, eq=False)
class GluedCoupling:
    """Min-glued density on X³ with prescribed 1-2 and 2-3 faces."""

    first: Coupling
    second: Coupling
    density: np.ndarray

    def project_12(self) -> Coupling:
        return Coupling(self.first.left, self.first.right, self.density.max(axis=2))

    def project_23(self) -> Coupling:
        return Coupling(self.second.left, self.second.right, self.density.max(axis=0))

    def project_13(self) -> Coupling:
        return Coupling(self.first.left, self.second.right, self.density.max(axis=1))


def glue(xi12: Coupling, xi23: Coupling) -> GluedCoupling:
    """d(x₁,x₂,x₃) = min(γ₁₂(x₁,x₂), γ₂₃(x₂,x₃)).

    Requires the middle marginals to agree exactly.  The min against a
    matching middle density keeps both input faces intact (max over the
    third axis selects the smaller entry back out), so the outer face is
    an admissible coupling of the outer measures.
    """
    require_same_space(xi12.space, xi23.space, "couplings")
    if not np.array_equal(xi12.right.density, xi23.left.density):
        raise ValueError("middle marginals differ; couplings do not share the middle measure")
    density = np.minimum(xi12.gamma[:, :, None], xi23.gamma[None, :, :])
    return GluedCoupling(xi12, xi23, density)


def random_admissible_coupling(
    mu1: IdempotentMeasure, mu2: IdempotentMeasure, rng, extra: float = 0.5
) -> Coupling:
    """Sample an admissible coupling: the cross coupling ⊕ bounded extra mass.

    Any entry at most min(λ₁(x), λ₂(y)) can be ⊕-added without moving a
    marginal, so the sampler sprinkles such entries at random.  Depths are
    quarter-integers, keeping every comparison exact.
    """
    base = cross_coupling(mu1, mu2).gamma.copy()
    bound = entrywise_bound(mu1, mu2)
    rows = support_indices(mu1)
    cols = support_indices(mu2)
    for i in rows:
        for j in cols:
            if rng.random() < extra:
                depth = 0.25 * int(rng.integers(0, 17))
                base[i, j] = max(base[i, j], bound[i, j] - depth)
    return Coupling(mu1, mu2, base)
