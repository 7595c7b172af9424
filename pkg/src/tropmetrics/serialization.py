"""File formats: JSON mappings with "-inf" spelled out as a string.

Space      {"points": [...], "rho": [[...], ...]}
Measure    {"space": <path or inline space>, "lambda": {point: value}}
Coupling   {"space": ..., "mu1": <measure ref>, "mu2": <measure ref>,
            "gamma": [[...], ...]}
Sequence   {"space": ..., "limit": {point: value}, "terms": [{...}, ...]}

Values are either JSON numbers or the literal string "-inf"; numbers are
written back via repr, so finite values round-trip bit-exactly.  A
measure reference is a path to a measure file, an inline measure object,
or a bare lambda mapping (the surrounding space then applies).  Points
missing from a lambda mapping have density -inf.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .convergence import MeasureSequence
from .couplings import Coupling
from .maxplus import value_from_json, value_to_json
from .measures import IdempotentMeasure
from .spaces import FiniteMetricSpace, same_space, validate_space


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _dump_json(obj, path: str):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def space_from_obj(obj) -> FiniteMetricSpace:
    if not isinstance(obj, dict) or "points" not in obj or "rho" not in obj:
        raise ValueError("a space needs 'points' and 'rho'")
    rho = [[value_from_json(v) for v in row] for row in obj["rho"]]
    return validate_space(obj["points"], rho)


def space_to_obj(space: FiniteMetricSpace) -> dict:
    return {
        "points": list(space.points),
        "rho": [[value_to_json(v) for v in row] for row in space.rho],
    }


def _resolve_space(ref, base_dir: str) -> FiniteMetricSpace:
    if isinstance(ref, str):
        return load_space(os.path.join(base_dir, ref))
    return space_from_obj(ref)


def load_space(path: str) -> FiniteMetricSpace:
    return space_from_obj(_load_json(path))


def save_space(space: FiniteMetricSpace, path: str):
    _dump_json(space_to_obj(space), path)


def _measure_from_lambda(space: FiniteMetricSpace, mapping) -> IdempotentMeasure:
    if not isinstance(mapping, dict):
        raise ValueError("'lambda' must map points to values")
    return IdempotentMeasure.from_mapping(
        space, {str(k): value_from_json(v) for k, v in mapping.items()}
    )


def measure_from_obj(obj, base_dir: str = ".") -> IdempotentMeasure:
    if not isinstance(obj, dict) or "lambda" not in obj or "space" not in obj:
        raise ValueError("a measure needs 'space' and 'lambda'")
    space = _resolve_space(obj["space"], base_dir)
    return _measure_from_lambda(space, obj["lambda"])


def measure_to_obj(mu: IdempotentMeasure, space_ref=None) -> dict:
    return {
        "space": space_ref if space_ref is not None else space_to_obj(mu.space),
        "lambda": {p: value_to_json(v) for p, v in mu.as_mapping().items()},
    }


def load_measure(path: str) -> IdempotentMeasure:
    return measure_from_obj(_load_json(path), os.path.dirname(path) or ".")


def save_measure(mu: IdempotentMeasure, path: str, space_ref=None):
    _dump_json(measure_to_obj(mu, space_ref), path)


def _measure_ref(ref, space: FiniteMetricSpace, base_dir: str) -> IdempotentMeasure:
    """A path, an inline measure object, or a bare lambda mapping."""
    if isinstance(ref, str):
        mu = load_measure(os.path.join(base_dir, ref))
        if not same_space(mu.space, space):
            raise ValueError(f"measure file {ref!r} lives on a different space")
        return mu
    if isinstance(ref, dict) and "lambda" in ref:
        if "space" in ref:
            mu = measure_from_obj(ref, base_dir)
            if not same_space(mu.space, space):
                raise ValueError("inline measure lives on a different space")
            return mu
        return _measure_from_lambda(space, ref["lambda"])
    if isinstance(ref, dict):
        return _measure_from_lambda(space, ref)
    raise ValueError("measure reference must be a path or a mapping")


def coupling_from_obj(obj, base_dir: str = ".") -> Coupling:
    needed = {"space", "mu1", "mu2", "gamma"}
    if not isinstance(obj, dict) or not needed <= set(obj):
        raise ValueError(f"a coupling needs {sorted(needed)}")
    space = _resolve_space(obj["space"], base_dir)
    mu1 = _measure_ref(obj["mu1"], space, base_dir)
    mu2 = _measure_ref(obj["mu2"], space, base_dir)
    gamma = np.array([[value_from_json(v) for v in row] for row in obj["gamma"]], dtype=float)
    if gamma.shape != (space.n, space.n):
        raise ValueError(f"gamma must be {space.n}x{space.n}, got {gamma.shape}")
    return Coupling(mu1, mu2, gamma)


def coupling_to_obj(xi: Coupling) -> dict:
    return {
        "space": space_to_obj(xi.space),
        "mu1": {"lambda": {p: value_to_json(v) for p, v in xi.left.as_mapping().items()}},
        "mu2": {"lambda": {p: value_to_json(v) for p, v in xi.right.as_mapping().items()}},
        "gamma": [[value_to_json(v) for v in row] for row in xi.gamma],
    }


def load_coupling(path: str) -> Coupling:
    return coupling_from_obj(_load_json(path), os.path.dirname(path) or ".")


def save_coupling(xi: Coupling, path: str):
    _dump_json(coupling_to_obj(xi), path)


def sequence_from_obj(obj, base_dir: str = ".") -> MeasureSequence:
    needed = {"space", "limit", "terms"}
    if not isinstance(obj, dict) or not needed <= set(obj):
        raise ValueError(f"a sequence needs {sorted(needed)}")
    space = _resolve_space(obj["space"], base_dir)
    limit = _measure_from_lambda(space, obj["limit"])
    terms = tuple(_measure_from_lambda(space, t) for t in obj["terms"])
    return MeasureSequence(terms, limit)


def sequence_to_obj(seq: MeasureSequence) -> dict:
    def lam(m):
        return {p: value_to_json(v) for p, v in m.as_mapping().items()}

    return {
        "space": space_to_obj(seq.space),
        "limit": lam(seq.limit),
        "terms": [lam(t) for t in seq.terms],
    }


def load_sequence(path: str) -> MeasureSequence:
    return sequence_from_obj(_load_json(path), os.path.dirname(path) or ".")


def save_sequence(seq: MeasureSequence, path: str):
    _dump_json(sequence_to_obj(seq), path)
