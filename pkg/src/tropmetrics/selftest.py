"""Built-in sanity bundle behind ``tropmetrics selftest``.

Checks the frozen two-point instance, the Dirac extension property, the
diameter bound, coupling admissibility on random pairs, and the
dequantisation envelope.  Returns printable lines plus an overall flag;
the CLI turns a failure into exit status 2.
"""

from __future__ import annotations

import math

import numpy as np

from .couplings import (
    check_admissible,
    cross_coupling,
    random_admissible_coupling,
    support_width,
    tensor_coupling,
    transport_cost,
)
from .distances import (
    bottleneck_distance_fast,
    bottleneck_distance_oracle,
    transport_distance_fast,
    transport_distance_oracle,
)
from .maxplus import oplus_h
from .measures import dirac
from .reference import two_point_instance
from .sampling import random_measure, random_space
from .spaces import diam, diametral_pair


def run_selftest(seed: int = 0, tolerance: float = 1e-9):
    """Returns (ok, lines)."""
    rng = np.random.default_rng(seed)
    lines: list[str] = []
    failures = 0

    def check(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        mark = "ok" if ok else "FAIL"
        suffix = f" ({detail})" if detail else ""
        lines.append(f"[{mark}] {name}{suffix}")
        if not ok:
            failures += 1

    inst = two_point_instance()
    for method, fn in (("fast", transport_distance_fast), ("oracle", transport_distance_oracle)):
        r = fn(inst.mu1, inst.mu2)
        check(f"two-point transport distance, {method}", abs(r.value - inst.transport) <= tolerance,
              f"value {r.value}")
    for method, fn in (("fast", bottleneck_distance_fast), ("oracle", bottleneck_distance_oracle)):
        r = fn(inst.mu1, inst.mu2)
        check(f"two-point bottleneck distance, {method}", abs(r.value - inst.bottleneck) <= tolerance,
              f"value {r.value}")
    check("two-point handmade coupling admissible",
          bool(check_admissible(inst.coupling.gamma, inst.mu1, inst.mu2)))
    check("two-point handmade coupling costs nothing",
          transport_cost(inst.coupling) == 0.0)
    check("two-point handmade coupling reaches across",
          support_width(inst.coupling) == 1.0)

    for trial in range(10):
        space = random_space(rng, int(rng.integers(2, 7)))
        pts = space.points
        i, j = rng.integers(0, space.n), rng.integers(0, space.n)
        da, db = dirac(space, pts[int(i)]), dirac(space, pts[int(j)])
        want = float(space.rho[int(i), int(j)])
        got = bottleneck_distance_fast(da, db).value
        if abs(got - want) > tolerance:
            check(f"Dirac extension trial {trial}", False, f"{got} vs {want}")
            break
    else:
        check("Dirac pairs reproduce the ground distance (10 spaces)", True)

    for trial in range(10):
        space = random_space(rng, int(rng.integers(2, 7)))
        top = diam(space)
        p, q = diametral_pair(space)
        attained = bottleneck_distance_fast(dirac(space, p), dirac(space, q)).value
        widest = max(
            bottleneck_distance_fast(random_measure(rng, space), random_measure(rng, space)).value
            for _ in range(20)
        )
        if not (widest <= top + tolerance and abs(attained - top) <= tolerance):
            check(f"diameter trial {trial}", False, f"widest {widest}, diam {top}")
            break
    else:
        check("bottleneck distance bounded by the diameter and attains it", True)

    for trial in range(25):
        space = random_space(rng, int(rng.integers(2, 7)))
        mu1, mu2 = random_measure(rng, space), random_measure(rng, space)
        xs = cross_coupling(mu1, mu2)
        tn = tensor_coupling(mu1, mu2)
        rnd = random_admissible_coupling(mu1, mu2, rng)
        best_t = transport_distance_fast(mu1, mu2).value
        best_b = bottleneck_distance_fast(mu1, mu2).value
        ok = (
            bool(check_admissible(xs.gamma, mu1, mu2))
            and bool(check_admissible(tn.gamma, mu1, mu2))
            and transport_cost(rnd) >= best_t - tolerance
            and support_width(rnd) >= best_b - tolerance
        )
        if not ok:
            check(f"coupling algebra trial {trial}", False)
            break
    else:
        check("cross/tensor admissible; random couplings never beat the optima", True)

    envelope_ok = True
    for u in range(-3, 4):
        for v in range(-3, 4):
            prev = None
            for h in (0.001, 0.01, 0.1, 1.0):
                s = oplus_h(u, v, h)
                gap = s - max(u, v)
                if not (-tolerance <= gap <= h * math.log(2) + tolerance):
                    envelope_ok = False
                if prev is not None and gap < prev - tolerance:
                    envelope_ok = False
                prev = gap
    check("dequantisation envelope on the small grid", envelope_ok)

    return failures == 0, lines
