"""Command-line front end.

Exit status: 0 on success, 1 when an input fails to validate or parse,
2 when a property the tool promises to uphold is violated (method
disagreement, verdict disagreement, selftest failure).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

from .convergence import (
    EpsilonSchedule,
    convergence_table,
    metric_converges,
    pointwise_converges,
    transport_converges,
)
from .couplings import (
    check_admissible,
    cross_coupling,
    glue,
    support_width,
    tensor_coupling,
    transport_cost,
)
from .distances import OracleSizeError, distance
from .maxplus import format_value, oplus_h
from .measures import pushforward
from .selftest import run_selftest
from .serialization import (
    load_coupling,
    load_measure,
    load_sequence,
    load_space,
    save_coupling,
    save_measure,
)
from .spaces import same_space

ENV_TOLERANCE = "TROPMETRICS_TOLERANCE"


def default_tolerance() -> float:
    raw = os.environ.get(ENV_TOLERANCE)
    if raw is None:
        return 1e-9
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{ENV_TOLERANCE} must be a number, got {raw!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{ENV_TOLERANCE} must be positive and finite, got {value}")
    return value


@dataclass
class RunConfig:
    command: str
    paths: dict[str, str] = field(default_factory=dict)
    metric: str | None = None
    method: str = "fast"
    tolerance: float = 1e-9
    seed: int = 0
    out: str | None = None
    options: dict = field(default_factory=dict)


def _fmt(x) -> str:
    if isinstance(x, float) and math.isinf(x) and x > 0:
        return "inf"
    return format_value(x)


def _cmd_validate(cfg: RunConfig) -> int:
    checked = 0
    if "space" in cfg.paths:
        space = load_space(cfg.paths["space"])
        print(f"space ok: {space.n} points, diameter {_fmt(float(space.rho.max()))}")
        checked += 1
    if "measure" in cfg.paths:
        mu = load_measure(cfg.paths["measure"])
        supp = sum(1 for v in mu.density if math.isfinite(v))
        print(f"measure ok: support {supp} of {mu.space.n} points")
        checked += 1
    if "coupling" in cfg.paths:
        xi = load_coupling(cfg.paths["coupling"])
        report = check_admissible(xi.gamma, xi.left, xi.right)
        print(f"coupling ok: {report.message}, transport cost {_fmt(transport_cost(xi))}, "
              f"support width {_fmt(support_width(xi))}")
        checked += 1
    if "sequence" in cfg.paths:
        seq = load_sequence(cfg.paths["sequence"])
        print(f"sequence ok: {len(seq.terms)} terms on {seq.space.n} points")
        checked += 1
    if not checked:
        raise ValueError("nothing to validate: pass --space, --measure, --coupling or --sequence")
    return 0


def _load_pair(cfg: RunConfig):
    mu1 = load_measure(cfg.paths["mu1"])
    mu2 = load_measure(cfg.paths["mu2"])
    if "space" in cfg.paths:
        space = load_space(cfg.paths["space"])
        if not (same_space(mu1.space, space) and same_space(mu2.space, space)):
            raise ValueError("measures do not live on the given space")
    if not same_space(mu1.space, mu2.space):
        raise ValueError("measures live on different spaces")
    return mu1, mu2


def _cmd_dist(cfg: RunConfig) -> int:
    mu1, mu2 = _load_pair(cfg)
    max_pairs = cfg.options.get("max_pairs", 16)
    methods = ["fast", "oracle"] if cfg.method == "both" else [cfg.method]
    reports = {m: distance(cfg.metric, m, mu1, mu2, max_pairs=max_pairs) for m in methods}
    for m in methods:
        print(f"{cfg.metric} {m} = {_fmt(reports[m].value)}")
    if cfg.method != "both" and cfg.options.get("check"):
        other = "oracle" if cfg.method == "fast" else "fast"
        try:
            reports[other] = distance(cfg.metric, other, mu1, mu2, max_pairs=max_pairs)
            print(f"{cfg.metric} {other} = {_fmt(reports[other].value)} (cross-check)")
        except OracleSizeError as exc:
            print(f"cross-check skipped: {exc}")
    if len(reports) == 2:
        a, b = (reports[m].value for m in ("fast", "oracle"))
        if abs(a - b) > cfg.tolerance:
            print(f"methods disagree: |{_fmt(a)} - {_fmt(b)}| > {_fmt(cfg.tolerance)}",
                  file=sys.stderr)
            return 2
        print(f"methods agree within {_fmt(cfg.tolerance)}")
    if cfg.out:
        chosen = reports.get(cfg.method if cfg.method != "both" else "fast")
        save_coupling(chosen.witness, cfg.out)
        print(f"witness coupling written to {cfg.out}")
    return 0


def _cmd_couple(cfg: RunConfig) -> int:
    mu1, mu2 = _load_pair(cfg)
    builder = {"cross": cross_coupling, "tensor": tensor_coupling}[cfg.options["kind"]]
    xi = builder(mu1, mu2)
    print(f"{cfg.options['kind']} coupling: transport cost {_fmt(transport_cost(xi))}, "
          f"support width {_fmt(support_width(xi))}")
    if cfg.out:
        save_coupling(xi, cfg.out)
        print(f"coupling written to {cfg.out}")
    return 0


def _cmd_glue(cfg: RunConfig) -> int:
    xi12 = load_coupling(cfg.paths["first"])
    xi23 = load_coupling(cfg.paths["second"])
    glued = glue(xi12, xi23)
    import numpy as np

    ok12 = np.array_equal(glued.project_12().gamma, xi12.gamma)
    ok23 = np.array_equal(glued.project_23().gamma, xi23.gamma)
    outer = glued.project_13()
    w12, w23, w13 = support_width(xi12), support_width(xi23), support_width(outer)
    print(f"faces reproduce inputs: {'yes' if ok12 and ok23 else 'no'}")
    print(f"outer coupling admissible: yes, support width {_fmt(w13)}")
    print(f"width chain {_fmt(w13)} <= {_fmt(w12)} + {_fmt(w23)}: "
          f"{'yes' if w13 <= w12 + w23 + cfg.tolerance else 'no'}")
    if not (ok12 and ok23) or w13 > w12 + w23 + cfg.tolerance:
        return 2
    if cfg.out:
        save_coupling(outer, cfg.out)
        print(f"outer coupling written to {cfg.out}")
    return 0


def _cmd_pushforward(cfg: RunConfig) -> int:
    mu = load_measure(cfg.paths["measure"])
    target = load_space(cfg.paths["target"])
    with open(cfg.paths["map"]) as fh:
        mapping = json.load(fh)
    if not isinstance(mapping, dict):
        raise ValueError("point map file must be a JSON object {source: target}")
    nu = pushforward(mapping, mu, target)
    for p, v in nu.as_mapping().items():
        print(f"{p}: {_fmt(v)}")
    if cfg.out:
        save_measure(nu, cfg.out)
        print(f"measure written to {cfg.out}")
    return 0


def _cmd_dequantize(cfg: RunConfig) -> int:
    u, v = cfg.options["u"], cfg.options["v"]
    hs = cfg.options["h"] or [1.0, 0.1, 0.01, 0.001]
    base = max(u, v)
    print(f"max(u, v) = {_fmt(base)}")
    for h in sorted(hs, reverse=True):
        s = oplus_h(u, v, h)
        print(f"h = {_fmt(h)}: u (+)_h v = {_fmt(s)}, gap {_fmt(s - base)}")
    return 0


def _cmd_converge(cfg: RunConfig) -> int:
    seq = load_sequence(cfg.paths["sequence"])
    schedule = EpsilonSchedule(
        levels=tuple(2.0 ** -k for k in range(1, cfg.options.get("levels", 20) + 1)),
        start=cfg.options.get("start", 8),
        per_level=cfg.options.get("per_level", 1),
    )
    print("index,bottleneck,transport,pointwise")
    for i, bt, tr, pw in convergence_table(seq):
        print(f"{i},{_fmt(bt)},{_fmt(tr)},{_fmt(pw)}")
    pw_verdict = pointwise_converges(seq, schedule)
    bt_verdict = metric_converges(seq, schedule)
    tr_verdict = transport_converges(seq, schedule)
    print(f"pointwise converges: {'yes' if pw_verdict else 'no'}")
    print(f"bottleneck converges: {'yes' if bt_verdict else 'no'}")
    print(f"transport converges: {'yes' if tr_verdict else 'no'}")
    if pw_verdict != bt_verdict:
        print("pointwise and bottleneck verdicts disagree", file=sys.stderr)
        return 2
    return 0


def _cmd_selftest(cfg: RunConfig) -> int:
    ok, lines = run_selftest(seed=cfg.seed, tolerance=cfg.tolerance)
    for line in lines:
        print(line)
    print("selftest passed" if ok else "selftest FAILED")
    return 0 if ok else 2


_HANDLERS = {
    "validate": _cmd_validate,
    "dist": _cmd_dist,
    "couple": _cmd_couple,
    "glue": _cmd_glue,
    "pushforward": _cmd_pushforward,
    "dequantize": _cmd_dequantize,
    "converge": _cmd_converge,
    "selftest": _cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropmetrics",
        description="Idempotent measures on finite metric spaces: distances, couplings, convergence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate space/measure/coupling/sequence files")
    p.add_argument("--space")
    p.add_argument("--measure")
    p.add_argument("--coupling")
    p.add_argument("--sequence")

    p = sub.add_parser("dist", help="distance between two measures")
    p.add_argument("--metric", choices=["dI", "rhoI"], required=True)
    p.add_argument("--method", choices=["fast", "oracle", "both"], default="fast")
    p.add_argument("--check", action="store_true",
                   help="cross-validate against the other method when feasible")
    p.add_argument("--space")
    p.add_argument("--mu1", required=True)
    p.add_argument("--mu2", required=True)
    p.add_argument("--max-pairs", type=int, default=16)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--out", help="write the witness coupling here")

    p = sub.add_parser("couple", help="build a canonical coupling")
    p.add_argument("--kind", choices=["cross", "tensor"], default="cross")
    p.add_argument("--space")
    p.add_argument("--mu1", required=True)
    p.add_argument("--mu2", required=True)
    p.add_argument("--out")

    p = sub.add_parser("glue", help="glue two couplings over their middle measure")
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--out", help="write the outer (1-3) coupling here")

    p = sub.add_parser("pushforward", help="image of a measure under a point map")
    p.add_argument("--measure", required=True)
    p.add_argument("--map", required=True, help="JSON object {source point: target point}")
    p.add_argument("--target", required=True, help="target space file")
    p.add_argument("--out")

    p = sub.add_parser("dequantize", help="deformed addition at several temperatures")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--h", type=float, action="append", default=[])

    p = sub.add_parser("converge", help="per-term gap table and verdicts for a sequence")
    p.add_argument("--sequence", required=True)
    p.add_argument("--levels", type=int, default=20)
    p.add_argument("--start", type=int, default=8)
    p.add_argument("--per-level", type=int, default=1)

    p = sub.add_parser("selftest", help="run the built-in checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    tolerance = getattr(args, "tolerance", None)
    cfg = RunConfig(
        command=args.command,
        tolerance=default_tolerance() if tolerance is None else tolerance,
        seed=getattr(args, "seed", 0),
        out=getattr(args, "out", None),
        metric=getattr(args, "metric", None),
        method=getattr(args, "method", "fast"),
    )
    for key in ("space", "measure", "coupling", "sequence", "mu1", "mu2",
                "first", "second", "map", "target"):
        value = getattr(args, key, None)
        if value is not None:
            cfg.paths[key] = value
    for key in ("check", "max_pairs", "kind", "u", "v", "h", "levels", "start", "per_level"):
        if hasattr(args, key):
            cfg.options[key] = getattr(args, key)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return _HANDLERS[cfg.command](cfg)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
