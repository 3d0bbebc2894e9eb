"""Command-line surface: tables, releases, sensitivity reports, audits.

Every command is deterministic given its flags plus --seed, and emits either
CSV (grids; '.' decimals, 17 significant digits, schema comment line) or JSON
(single structured results; schema field).  Exit codes: 0 success, 2
parameter or I/O error, 3 input parse error, 4 audit violation found.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import audit as audit_mod
from . import competitors as comp
from .dist import PolyPlaceParams, mean, pdf, sample, variance
from .mechanism import MechanismSpec, laplace_pdf, release_polyplace
from .rng import make_rng
from .sensitivity import Dataset, SensitivityReport, median_smooth_sensitivity

SCHEMA = "polyplace/1"
QUERIES = ("median", "count_range")


class InputParseError(Exception):
    """Malformed input file (exit code 3)."""


def _fmt(x: float) -> str:
    """17 significant digits, locale-independent."""
    return format(x, ".17g")


def _cell(x) -> str:
    """CSV cell: empty for undefined/infinite entries."""
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return _fmt(x)


def _jsonable(x):
    """JSON value: null for undefined/infinite entries."""
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return x


def _write_text(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, newline="\n")


def _emit_csv(header: list[str], rows: list[list], output: str | None) -> None:
    lines = [f"# {SCHEMA}", ",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    _write_text("\n".join(lines) + "\n", output)


def _emit_json(obj: dict, output: str | None) -> None:
    payload = {"schema": SCHEMA, **obj}
    _write_text(json.dumps(payload, indent=2, allow_nan=False) + "\n", output)


def read_value_csv(path: str) -> list[float]:
    """One numeric value per line; a single non-numeric header is allowed."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputParseError(f"cannot read {path}: {exc}") from exc
    rows = [line.strip() for line in lines]
    rows = [r for r in rows if r]
    if not rows:
        raise InputParseError(f"{path}: no data rows")
    start = 0
    try:
        float(rows[0])
    except ValueError:
        start = 1
    values = []
    for r in rows[start:]:
        try:
            values.append(float(r))
        except ValueError:
            raise InputParseError(f"{path}: not a number: {r!r}") from None
    if not values:
        raise InputParseError(f"{path}: no numeric rows")
    return values


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


# --------------------------------------------------------------------------
# commands


def cmd_pdf_table(args) -> int:
    if (args.s is not None or args.alpha is not None) and args.gamma is not None:
        raise ValueError("give either --s/--alpha or --epsilon/--gamma, not both")
    if args.s is not None or args.alpha is not None:
        if args.s is None or args.alpha is None or len(args.s) != len(args.alpha):
            raise ValueError("--s and --alpha must both be given, with equal lengths")
        pairs = list(zip(args.s, args.alpha))
    elif args.gamma is not None:
        epsilon = 1.0 if args.epsilon is None else args.epsilon
        pairs = [(1.0 / g, epsilon / g) for g in args.gamma]
    else:
        # Shapes 1.1, 1.5 and 5 sit at gamma ~0.909, 2/3 and 0.2 for unit
        # budget and unit smooth sensitivity.
        pairs = [(1.1, 1.1), (1.5, 1.5), (5.0, 5.0)]

    params = [PolyPlaceParams(s, a) for s, a in pairs]
    x = np.linspace(args.x_min, args.x_max, args.points)
    columns: dict[str, np.ndarray] = {}
    for p in params:
        columns[f"polyplace_s{p.scale:g}_a{p.shape:g}"] = pdf(p, x)
    columns["laplace_b1"] = laplace_pdf(1.0, x)

    header = ["x", *columns.keys()]
    rows = [[xv, *(col[i] for col in columns.values())] for i, xv in enumerate(x)]
    if args.format == "json":
        _emit_json(
            {
                "command": "pdf-table",
                "x": [float(v) for v in x],
                "columns": {k: [float(v) for v in col] for k, col in columns.items()},
            },
            args.output,
        )
    else:
        _emit_csv(header, rows, args.output)
    if args.plot:
        from .figures import save_pdf_figure

        save_pdf_figure(x, columns, args.plot)
    return 0


def cmd_stddev_table(args) -> int:
    if not 0.0 < args.delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {args.delta}")
    if args.epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {args.epsilon}")
    gammas = comp.default_gamma_grid(args.epsilon, args.points)
    rows = comp.comparison_table(args.epsilon, args.delta, gammas)
    header = [
        "gamma",
        "polyplace",
        "student_t",
        "student_t_shape",
        "cauchy",
        "cauchy_shape",
        "laplace_smooth",
        "laplace_global",
    ]
    table = [
        [
            r.gamma,
            r.stddev_polyplace,
            r.stddev_student_t_opt,
            r.t_shape_opt,
            r.stddev_cauchy_opt,
            r.cauchy_shape_opt,
            r.stddev_laplace_smooth,
            r.stddev_laplace_global,
        ]
        for r in rows
    ]
    if args.format == "json":
        _emit_json(
            {
                "command": "stddev-table",
                "epsilon": args.epsilon,
                "delta": args.delta,
                "rows": [
                    dict(zip(header, (_jsonable(v) for v in row))) for row in table
                ],
            },
            args.output,
        )
    else:
        _emit_csv(header, table, args.output)
    if args.plot:
        from .figures import save_stddev_figure

        save_stddev_figure(rows, args.plot)
    return 0


def _params_from_args(args) -> PolyPlaceParams:
    direct = args.s is not None or args.alpha is not None
    derived = args.epsilon is not None or args.gamma is not None
    if direct and derived:
        raise ValueError("give either --s/--alpha or --epsilon/--gamma, not both")
    if direct:
        if args.s is None or args.alpha is None:
            raise ValueError("--s and --alpha must be given together")
        return PolyPlaceParams(args.s, args.alpha)
    if args.epsilon is None or args.gamma is None:
        raise ValueError("give either --s/--alpha or --epsilon/--gamma")
    spec = MechanismSpec(args.epsilon, args.gamma)
    spec.require_polyplace_valid()
    return PolyPlaceParams(1.0 / args.gamma, args.epsilon / args.gamma)


def cmd_sample(args) -> int:
    params = _params_from_args(args)
    rng = make_rng(args.seed)
    draws = np.atleast_1d(sample(params, rng, size=args.n))
    if args.format == "json":
        _emit_json(
            {
                "command": "sample",
                "s": params.scale,
                "alpha": params.shape,
                "seed": args.seed,
                "samples": [float(v) for v in draws],
            },
            args.output,
        )
    else:
        _emit_csv(["sample"], [[float(v)] for v in draws], args.output)
    return 0


def cmd_variance(args) -> int:
    params = _params_from_args(args)
    var = variance(params)
    sd = math.sqrt(var) if math.isfinite(var) else math.inf
    _emit_json(
        {
            "command": "variance",
            "s": params.scale,
            "alpha": params.shape,
            "mean": mean(params),
            "variance": _jsonable(var),
            "stddev": _jsonable(sd),
            "infinite_variance": not math.isfinite(var),
        },
        args.output,
    )
    return 0


def _count_range_value_and_ss(values: list[float], lo, hi) -> tuple[float, SensitivityReport, dict]:
    """Count of values inside [lo, hi] (missing side unbounded).

    Under replace-one adjacency with unrestricted replacement values the local
    sensitivity is 1 everywhere as soon as one side of the range is finite
    (any record can be swapped across the boundary), hence the smooth
    sensitivity is exactly 1 for every gamma.  With no range at all the count
    is constant and the sensitivity 0.
    """
    low = -math.inf if lo is None else lo
    high = math.inf if hi is None else hi
    if low > high:
        raise ValueError(f"empty counting range [{low}, {high}]")
    value = float(sum(1 for v in values if low <= v <= high))
    ss = 0.0 if (low == -math.inf and high == math.inf) else 1.0
    report = SensitivityReport(ss, ss, gamma=math.nan, per_distance_max=None)
    meta = {"lo": _jsonable(low), "hi": _jsonable(high)}
    return value, report, meta


def _query_from_args(args, gamma: float):
    values = read_value_csv(args.input)
    if args.query == "median":
        if args.lo is None or args.hi is None:
            raise ValueError("median requires --lo and --hi bounds")
        dataset = Dataset(tuple(values), args.lo, args.hi)
        report = median_smooth_sensitivity(dataset, gamma)
        value = sorted(values)[(len(values) - 1) // 2]
        meta = {"lo": args.lo, "hi": args.hi}
    else:
        value, report, meta = _count_range_value_and_ss(values, args.lo, args.hi)
        report = SensitivityReport(
            report.local_sensitivity, report.smooth_sensitivity, gamma, None
        )
    return value, report, meta, len(values)


def cmd_mechanism(args) -> int:
    spec = MechanismSpec(args.epsilon, args.gamma)
    spec.require_polyplace_valid()
    value, report, meta, n = _query_from_args(args, args.gamma)
    rng = make_rng(args.seed)
    result = release_polyplace(value, report.smooth_sensitivity, spec, rng)
    _emit_json(
        {
            "command": "mechanism",
            "query": args.query,
            **meta,
            "n": n,
            "query_value": value,
            "smooth_sensitivity": report.smooth_sensitivity,
            "noisy_value": result.noisy_value,
            "spec": {"epsilon": args.epsilon, "gamma": args.gamma},
            "seed": args.seed,
            "noise_scale": result.noise_scale_used,
            "distribution": result.distribution_tag,
            "degenerate": result.degenerate,
            "infinite_variance": result.infinite_variance,
        },
        args.output,
    )
    return 0


def cmd_smooth_sens(args) -> int:
    if args.gamma is None or args.gamma <= 0.0:
        raise ValueError("smooth-sens requires a positive --gamma")
    value, report, meta, n = _query_from_args(args, args.gamma)
    _emit_json(
        {
            "command": "smooth-sens",
            "query": args.query,
            **meta,
            "n": n,
            "gamma": args.gamma,
            "query_value": value,
            "local_sensitivity": report.local_sensitivity,
            "smooth_sensitivity": report.smooth_sensitivity,
            "per_distance_max": list(report.per_distance_max)
            if report.per_distance_max is not None
            else None,
        },
        args.output,
    )
    return 0


def cmd_audit(args) -> int:
    spec = MechanismSpec(args.epsilon, args.gamma)
    report = audit_mod.audit_privacy(spec)
    argmax = None
    if report.argmax_scenario is not None:
        argmax = {
            "lambda_r": report.argmax_scenario.lambda_r,
            "lambda_s": report.argmax_scenario.lambda_s,
            "x": report.argmax_x,
        }
    _emit_json(
        {
            "command": "audit",
            "epsilon": args.epsilon,
            "gamma": args.gamma,
            "exp_epsilon": math.exp(args.epsilon),
            "max_ratio": report.max_ratio,
            "argmax": argmax,
            "grid_size": report.grid_size,
            "violation_count": len(report.violations),
            "violations": [
                {
                    "lambda_r": sc.lambda_r,
                    "lambda_s": sc.lambda_s,
                    "x": x,
                    "ratio": ratio,
                }
                for sc, x, ratio in report.violations[:20]
            ],
        },
        args.output,
    )
    return 4 if report.violations else 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyplace",
        description="PolyPlace smooth-sensitivity noise: tables, releases, audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p, formats=False, plot=False):
        p.add_argument("--output", help="write to this path instead of stdout")
        if formats:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        if plot:
            p.add_argument("--plot", help="also render a figure to this path")

    p = sub.add_parser("pdf-table", help="density table for selected family members")
    p.add_argument("--s", type=_float_list, help="comma-separated scales")
    p.add_argument("--alpha", type=_float_list, help="comma-separated shapes")
    p.add_argument("--epsilon", type=float, help="budget for --gamma-derived pairs")
    p.add_argument("--gamma", type=_float_list, help="comma-separated smoothing values")
    p.add_argument("--x-min", type=float, default=-6.0)
    p.add_argument("--x-max", type=float, default=6.0)
    p.add_argument("--points", type=int, default=2001)
    add_output(p, formats=True, plot=True)
    p.set_defaults(func=cmd_pdf_table)

    p = sub.add_parser("stddev-table", help="per-gamma stddev of all mechanisms")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1e-5)
    p.add_argument("--points", type=int, default=50)
    add_output(p, formats=True, plot=True)
    p.set_defaults(func=cmd_stddev_table)

    p = sub.add_parser("sample", help="draw noise samples")
    p.add_argument("--s", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    add_output(p, formats=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("variance", help="closed-form moments of one instance")
    p.add_argument("--s", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--gamma", type=float)
    add_output(p)
    p.set_defaults(func=cmd_variance)

    def add_query_flags(p):
        p.add_argument("--input", required=True, help="CSV, one value per line")
        p.add_argument("--query", choices=QUERIES, required=True)
        p.add_argument("--lo", type=float, help="lower bound / range end")
        p.add_argument("--hi", type=float, help="upper bound / range end")

    p = sub.add_parser("mechanism", help="private release of a query on a dataset")
    add_query_flags(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    add_output(p)
    p.set_defaults(func=cmd_mechanism)

    p = sub.add_parser("smooth-sens", help="sensitivity report for a dataset")
    add_query_flags(p)
    p.add_argument("--gamma", type=float, required=True)
    add_output(p)
    p.set_defaults(func=cmd_smooth_sens)

    p = sub.add_parser("audit", help="privacy-loss ratio search on the default grid")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    add_output(p)
    p.set_defaults(func=cmd_audit)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputParseError as exc:
        print(f"polyplace: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"polyplace: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
