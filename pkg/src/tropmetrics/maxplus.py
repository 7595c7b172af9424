"""Scalar arithmetic in the max-plus semiring.

Values live in R ∪ {-inf}: ⊕ is max, ⊙ is ordinary addition, the
⊕-identity is -inf (absorbing for ⊙) and the ⊙-identity is 0.  We keep
-inf as the IEEE float('-inf'); with NaN and +inf rejected at every
entry point, float max/+ realise the semiring exactly, and -inf has a
single representation.  ``odot`` still special-cases -inf so absorption
never depends on floating-point edge behaviour.

``oplus_h`` is the smooth deformation h*ln(e^(u/h) + e^(v/h)) that
collapses onto ⊕ as h -> 0; it is evaluated stably by factoring out the
max, so no intermediate exp can overflow.
"""

from __future__ import annotations

import math

import numpy as np

NEG_INF = float("-inf")

#: multiplicative unit of the semiring
UNIT = 0.0


def as_value(x) -> float:
    """Coerce x to a max-plus scalar, rejecting NaN and +inf."""
    v = float(x)
    if math.isnan(v):
        raise ValueError("NaN is not a max-plus value")
    if v == math.inf:
        raise ValueError("+inf is not a max-plus value")
    return v


def as_value_array(values, what: str = "values") -> np.ndarray:
    """Coerce to a float array whose entries are max-plus scalars."""
    arr = np.asarray(values, dtype=float)
    if np.isnan(arr).any():
        raise ValueError(f"{what} contain NaN")
    if (arr == math.inf).any():
        raise ValueError(f"{what} contain +inf")
    return arr


def is_finite(x: float) -> bool:
    return math.isfinite(x)


def oplus(a, b) -> float:
    """Tropical addition a ⊕ b = max(a, b)."""
    return max(as_value(a), as_value(b))


def odot(a, b) -> float:
    """Tropical multiplication a ⊙ b = a + b, with -inf absorbing."""
    a = as_value(a)
    b = as_value(b)
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


def oplus_h(u, v, h) -> float:
    """Deformed addition u ⊕_h v = h*ln(e^(u/h) + e^(v/h)).

    Monotone in h, and squeezed between max(u, v) and max(u, v) + h*ln 2.
    -inf arguments behave as the ⊕-identity.
    """
    h = float(h)
    if not math.isfinite(h) or h <= 0:
        raise ValueError(f"deformation parameter must be positive, got {h}")
    u = as_value(u)
    v = as_value(v)
    if u == NEG_INF:
        return v
    if v == NEG_INF:
        return u
    m = max(u, v)
    return m + h * math.log1p(math.exp(-abs(u - v) / h))


def format_value(x, digits: int = 9) -> str:
    """Render a scalar the way the file formats and the CLI print it."""
    v = as_value(x)
    if v == NEG_INF:
        return "-inf"
    return f"{v:.{digits}g}"


def value_to_json(x):
    """JSON form: finite floats stay numbers, -inf becomes the string '-inf'."""
    v = as_value(x)
    if v == NEG_INF:
        return "-inf"
    return v


def value_from_json(obj) -> float:
    """Inverse of value_to_json; rejects anything else."""
    if isinstance(obj, str):
        if obj.strip() == "-inf":
            return NEG_INF
        raise ValueError(f"expected a number or '-inf', got {obj!r}")
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ValueError(f"expected a number or '-inf', got {obj!r}")
    return as_value(obj)
