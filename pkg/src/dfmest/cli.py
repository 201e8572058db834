"""Command line front end.

Subcommands:

* ``dopt``          separation threshold between two convex objectives
* ``instance``      construct and certify a hard distribution pair
* ``risk``          risk curves or hard-instance floor reports from a config
* ``stationarity``  quantile stationarity concentration experiment
* ``conditions``    check the certification conditions for a loss family

``risk`` and ``stationarity`` write delimited tables (CSV by default,
JSON with ``--format json``) and, when an output path is given, render a
matplotlib figure next to the table.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .achievability import check_condition_c1, check_condition_c2
from .convex import ConvexFn, PiecewiseLinearConvex
from .errors import ConfigurationError
from .extreal import interval
from .families import RateFunction, family_from_descriptor
from .harness import (
    RISK_COLUMNS,
    ExperimentConfig,
    hard_instance_report,
    hard_instance_rows,
    jsonable,
    risk_curve,
    write_rows,
)
from .separation import blowup_pair, dopt, hard_instance_from_dict, norate_pair, quantile_pair
from .stationarity import concentration_experiment

STATIONARITY_COLUMNS = ("rep", "theta_hat", "stat_error", "exceeded")


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _params_arg(raw):
    """Inline JSON object, or @file.json to read one from disk."""
    if raw is None:
        return {}
    if raw.startswith("@"):
        return _load_json(raw[1:])
    return json.loads(raw)


def _emit_json(obj, out):
    text = json.dumps(jsonable(obj), indent=2) + "\n"
    if out:
        p = Path(out)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigurationError("this subcommand needs --config")
    cfg = ExperimentConfig.load(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.reps is not None:
        overrides["replications"] = args.reps
    if args.out is not None:
        overrides["out"] = args.out
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def _figure_path(out) -> Path:
    return Path(out).with_suffix(".png")


# ---------------------------------------------------------------------------
# subcommands


def cmd_dopt(args) -> int:
    if args.instance:
        inst = hard_instance_from_dict(_load_json(args.instance))
        f0, f1 = inst.population_losses()
        value = dopt(f0, f1, tol=args.tol)
        payload = {"dopt": value, "dopt_lb": inst.dopt_lb, "n": inst.n}
    elif args.f0 and args.f1:
        f0 = ConvexFn.from_pwl(PiecewiseLinearConvex.from_dict(_load_json(args.f0)))
        f1 = ConvexFn.from_pwl(PiecewiseLinearConvex.from_dict(_load_json(args.f1)))
        value = dopt(f0, f1, tol=args.tol)
        payload = {"dopt": value}
    else:
        raise ConfigurationError("dopt needs --instance, or both --f0 and --f1")
    _emit_json(payload, args.out)
    if args.out:
        print(f"dopt = {value:.12g} -> {args.out}")
    return 0


_CONSTRUCTORS = ("quantile_pair", "norate_pair", "blowup_pair")


def cmd_instance(args) -> int:
    params = _params_arg(args.params)
    if args.kind == "quantile_pair":
        inst = quantile_pair(params["alpha"], params["z0"], params["z1"], params["delta"])
    elif args.kind == "norate_pair":
        rate = RateFunction.from_descriptor(params["rate"])
        inst = norate_pair(rate, params["delta"])
    else:
        family = family_from_descriptor(params["family"])
        inst = blowup_pair(family, params["theta0"], params["delta_gap"], params["n"])
    _emit_json(inst.to_dict(), args.out)
    if args.out:
        print(
            f"certified {args.kind}: n={inst.n} dopt_lb={inst.dopt_lb:.6g} "
            f"tv_upper={inst.tv_upper:.6g} floor={inst.minimax_floor:.6g} -> {args.out}"
        )
    return 0


def cmd_risk(args) -> int:
    cfg = _load_config(args)
    fmt = args.fmt or "csv"
    report = None
    if cfg.kind == "risk_curve":
        rows = risk_curve(cfg)
    elif cfg.kind == "hard_instance":
        inst = cfg.resolve_instance()
        report = hard_instance_report(inst, cfg.resolve_estimators(), cfg.replications, cfg.seed)
        rows = hard_instance_rows(cfg, report)
    else:
        raise ConfigurationError("risk handles risk_curve or hard_instance configs")
    write_rows(rows, cfg.out, fmt, RISK_COLUMNS)
    if cfg.out:
        from . import plots

        fig = plots.risk_figure(rows, _figure_path(cfg.out))
        print(f"wrote {cfg.out} and {fig}")
        if report is not None:
            sidecar = str(cfg.out) + ".report.json"
            _emit_json(report, sidecar)
            print(f"floor {report['floor']:.6g} binds all estimators -> {sidecar}")
    return 0


def cmd_stationarity(args) -> int:
    cfg = _load_config(args)
    if cfg.kind != "stationarity":
        raise ConfigurationError("stationarity needs a stationarity config")
    if not cfg.n_grid:
        raise ConfigurationError("stationarity config needs one sample size in n_grid")
    family = cfg.resolve_family()
    dist_id, P = cfg.resolve_distributions()[0]
    n, t = cfg.n_grid[0], float(cfg.threshold)
    record = []
    freq, bound = concentration_experiment(
        family, P, n, t, cfg.replications, cfg.seed, record=record
    )
    summary = {
        "freq": freq,
        "bound": bound,
        "n": n,
        "t": t,
        "alpha": family.params["alpha"],
        "distribution_id": dist_id,
        "replications": cfg.replications,
        "seed": cfg.seed,
    }
    write_rows(record, cfg.out, args.fmt or "csv", STATIONARITY_COLUMNS)
    print(f"exceedance frequency {freq:.6g} (tail bound {bound:.6g}, n={n}, t={t:g})")
    if cfg.out:
        _emit_json(summary, str(cfg.out) + ".summary.json")
        from . import plots

        fig = plots.stationarity_figure(
            [r["stat_error"] for r in record], t, bound, _figure_path(cfg.out)
        )
        print(f"wrote {cfg.out} and {fig}")
    return 0


def cmd_conditions(args) -> int:
    cfg = _load_config(args)
    if cfg.kind != "condition_report":
        raise ConfigurationError("conditions needs a condition_report config")
    family = cfg.resolve_family()
    conds = cfg.conditions or {}
    reports = []
    for lo, hi in conds.get("c1_compacts", ()):
        reports.append(check_condition_c1(family, [interval(float(lo), float(hi))]))
    if "c2" in conds:
        c2 = conds["c2"]
        lo, hi = c2["probe"]
        reports.append(check_condition_c2(family, float(c2["eps"]), interval(float(lo), float(hi))))
    if not reports:
        raise ConfigurationError("config lists no conditions to check")
    for rep in reports:
        print(f"{rep.condition}: {rep.verdict}" + (f" ({rep.message})" if rep.message else ""))
    _emit_json([r.to_dict() for r in reports], cfg.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config file")
    common.add_argument("--seed", type=int, default=None, help="override config seed")
    common.add_argument("--reps", type=int, default=None, help="override replication count")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument(
        "--format", dest="fmt", choices=("csv", "json"), default=None,
        help="table format for row output (default csv)",
    )

    parser = argparse.ArgumentParser(
        prog="dfmest",
        description="distribution-free convex M-estimation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dopt", parents=[common], help="separation threshold of two objectives")
    p.add_argument("--f0", help="piecewise-linear objective (JSON)")
    p.add_argument("--f1", help="piecewise-linear objective (JSON)")
    p.add_argument("--instance", help="certified instance JSON; uses its population losses")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_dopt)

    p = sub.add_parser("instance", parents=[common], help="construct a certified hard pair")
    p.add_argument("kind", choices=_CONSTRUCTORS)
    p.add_argument("--params", help="constructor parameters as JSON (or @file.json)")
    p.set_defaults(func=cmd_instance)

    p = sub.add_parser("risk", parents=[common], help="risk curve / hard-instance report")
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("stationarity", parents=[common], help="stationarity concentration run")
    p.set_defaults(func=cmd_stationarity)

    p = sub.add_parser("conditions", parents=[common], help="certification condition checks")
    p.set_defaults(func=cmd_conditions)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
