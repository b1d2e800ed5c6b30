"""Command-line interface.

Subcommands: fit, simulate, envelope, fit-weighted, profile-freq.  Every
command prints a plain-text table, writes a machine-readable CSV (or JSON
with --json) and exits nonzero with a diagnostic line on any error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import asymptotics, montecarlo
from .dataio import DatasetFile, read_dataset, write_rows_csv, write_rows_json
from .envelope import simulated_envelope
from .errors import DataError, EstimationError
from .estimators import Grid, default_grid, fit_chen_xiao, fit_ml, fit_profile, fit_tamae
from .model import POSITIVE_HALF_LINE, UNIT_INTERVAL, FitResult
from .weighted import builtin_generator, fit_weighted, fit_weighted_exp_variant

DEFAULT_SCENARIOS = "0.5,0.5;0.5,1;0.5,2;1,0.5;1,1;1,2;2,0.5;2,1;2,2"
ALL_ESTIMATORS = ("ml", "chen-xiao", "tamae", "proposed")


def _parse_axis(spec: str) -> Tuple[float, ...]:
    lo_s, hi_s, step_s = spec.split(":")
    lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid axis {spec!r}")
    count = int(round((hi - lo) / step)) + 1
    return tuple(round(lo + k * step, 12) for k in range(count))


def parse_grid(spec: Optional[str]) -> Grid:
    """Parse 'rmin:rmax:step,smin:smax:step' into a Grid."""
    if spec is None:
        return default_grid()
    try:
        parts = spec.split(",")
        if len(parts) == 1:
            axis = _parse_axis(parts[0])
            return Grid(axis, axis)
        if len(parts) == 2:
            return Grid(_parse_axis(parts[0]), _parse_axis(parts[1]))
    except ValueError as exc:
        raise ValueError(f"cannot parse grid spec {spec!r}: {exc}") from exc
    raise ValueError(f"cannot parse grid spec {spec!r}")


def parse_scenarios(spec: str) -> List[Tuple[float, float]]:
    """Parse 'a,b;a,b;...' into (alpha, beta) pairs."""
    out = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad scenario {chunk!r}; expected alpha,beta")
        out.append((float(parts[0]), float(parts[1])))
    if not out:
        raise ValueError("empty scenario list")
    return out


def _parse_int_list(spec: str) -> List[int]:
    return [int(tok) for tok in spec.split(",") if tok.strip()]


def _parse_estimators(spec: str) -> List[str]:
    labels = [tok.strip() for tok in spec.split(",") if tok.strip()]
    unknown = [l for l in labels if l not in ALL_ESTIMATORS]
    if unknown:
        raise ValueError(f"unknown estimators {unknown}; choose from {', '.join(ALL_ESTIMATORS)}")
    return labels


def _emit(rows, fieldnames, path: Path, as_json: bool, float_format=None) -> None:
    if as_json:
        write_rows_json(rows, fieldnames, path)
    else:
        write_rows_csv(rows, fieldnames, path, float_format=float_format)


def _print_table(rows, fieldnames, fmt="%.4f") -> None:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return fmt % v
        return str(v)

    text = [[cell(r.get(f)) for f in fieldnames] for r in rows]
    widths = [max(len(f), *(len(t[i]) for t in text)) if text else len(f)
              for i, f in enumerate(fieldnames)]
    print("  ".join(f.ljust(w) for f, w in zip(fieldnames, widths)))
    for t in text:
        print("  ".join(c.ljust(w) for c, w in zip(t, widths)))


def _out_path(arg: Optional[str], default_stem: str, as_json: bool) -> Path:
    if arg:
        return Path(arg)
    return Path(f"{default_stem}.{'json' if as_json else 'csv'}")


def _fit_one(label: str, data: DatasetFile, grid: Grid) -> FitResult:
    if label == "ml":
        return fit_ml(data.sample)
    if label == "chen-xiao":
        return fit_chen_xiao(data.sample)
    if label == "tamae":
        return fit_tamae(data.sample)
    if label == "proposed":
        return fit_profile(data.sample, grid)
    raise ValueError(f"unknown estimator {label!r}")


def _fit_asymptotics(label: str, data: DatasetFile, res: FitResult, level: float):
    n = len(data.sample)
    if label == "ml":
        return asymptotics.ml_asymptotics(res.params, n, level)
    if label == "chen-xiao":
        pair = asymptotics.builtin_transform_pair("chen-xiao")
    elif label == "tamae":
        pair = asymptotics.builtin_transform_pair("tamae")
    else:
        r, s = res.selected_rs
        pair = asymptotics.builtin_transform_pair("rs", r=r, s=s)
    return asymptotics.delta_method(data.sample, pair, level)


FIT_FIELDS = ["estimator", "alpha", "beta", "loglik", "aic", "bic", "r", "s",
              "se_alpha", "se_beta", "ci_alpha_low", "ci_alpha_high",
              "ci_beta_low", "ci_beta_high", "error"]


def cmd_fit(args) -> int:
    data = read_dataset(args.file, column=args.column, domain=UNIT_INTERVAL)
    grid = parse_grid(args.grid)
    labels = _parse_estimators(args.estimators)
    rows = []
    fits = []
    for label in labels:
        row = {"estimator": label}
        try:
            res = _fit_one(label, data, grid)
        except EstimationError as exc:
            row["error"] = str(exc)
            rows.append(row)
            continue
        fits.append(res)
        row.update(alpha=res.params.alpha, beta=res.params.beta,
                   loglik=res.loglik, aic=res.aic, bic=res.bic)
        if res.selected_rs is not None:
            row["r"], row["s"] = res.selected_rs
        try:
            asy = _fit_asymptotics(label, data, res, args.level)
            row.update(se_alpha=asy.std_errors[0], se_beta=asy.std_errors[1],
                       ci_alpha_low=asy.wald_intervals[0][0],
                       ci_alpha_high=asy.wald_intervals[0][1],
                       ci_beta_low=asy.wald_intervals[1][0],
                       ci_beta_high=asy.wald_intervals[1][1])
        except (EstimationError, ValueError) as exc:
            row["error"] = f"asymptotics: {exc}"
        rows.append(row)

    out = _out_path(args.output, "fit_report", args.json)
    _emit(rows, FIT_FIELDS, out, args.json)
    _print_table(rows, FIT_FIELDS)
    print(f"wrote {out}")
    if args.plot and fits:
        from .plots import density_overlay_figure

        fig_path = out.with_name(out.stem + "_density.png")
        density_overlay_figure(data.sample.values, fits, fig_path)
        print(f"wrote {fig_path}")
    return 0


SIM_FIELDS = ["alpha", "beta", "n", "estimator", "mare_alpha", "mare_beta",
              "rmse_alpha", "rmse_beta", "se_alpha", "se_beta", "failures"]


def cmd_simulate(args) -> int:
    scenarios = parse_scenarios(args.scenarios)
    sizes = _parse_int_list(args.n)
    labels = _parse_estimators(args.estimators)
    grid = parse_grid(args.grid)
    rows = []
    for a, b in scenarios:
        for n in sizes:
            sc = montecarlo.Scenario(a, b, n, replications=args.reps, seed=args.seed)
            for mr in montecarlo.run_scenario(sc, labels, grid=grid):
                rows.append({
                    "alpha": mr.alpha, "beta": mr.beta, "n": mr.n,
                    "estimator": mr.estimator,
                    "mare_alpha": mr.metrics.mare_alpha, "mare_beta": mr.metrics.mare_beta,
                    "rmse_alpha": mr.metrics.rmse_alpha, "rmse_beta": mr.metrics.rmse_beta,
                    "se_alpha": mr.metrics.se_alpha, "se_beta": mr.metrics.se_beta,
                    "failures": mr.failures,
                })
    out = _out_path(args.output, "simulation_metrics", args.json)
    _emit(rows, SIM_FIELDS, out, args.json, float_format="%.4f")
    _print_table(rows, SIM_FIELDS)
    print(f"wrote {out}")
    return 0


ENVELOPE_FIELDS = ["order", "theoretical", "observed", "lower", "upper", "inside"]


def cmd_envelope(args) -> int:
    data = read_dataset(args.file, column=args.column, domain=UNIT_INTERVAL)
    grid = parse_grid(args.grid)
    res = _fit_one(args.method, data, grid)
    env = simulated_envelope(data.sample, res.params, n_sims=args.sims, seed=args.seed)
    rows = [{
        "order": k + 1,
        "theoretical": float(env.theoretical[k]),
        "observed": float(env.observed[k]),
        "lower": float(env.lower[k]),
        "upper": float(env.upper[k]),
        "inside": bool(env.inside[k]),
    } for k in range(env.observed.size)]
    out = _out_path(args.output, "envelope", args.json)
    _emit(rows, ENVELOPE_FIELDS, out, args.json)
    inside = int(env.inside.sum())
    print(f"{args.method} fit: alpha={res.params.alpha:.4f} beta={res.params.beta:.4f}; "
          f"{inside}/{env.observed.size} points inside the "
          f"{100 * (env.band[1] - env.band[0]):.0f}% envelope ({args.sims} simulations)")
    print(f"wrote {out}")
    if args.plot:
        from .plots import qq_envelope_figure

        fig_path = out.with_name(out.stem + "_qq.png")
        qq_envelope_figure(env, fig_path)
        print(f"wrote {fig_path}")
    return 0


WEIGHTED_FIELDS = ["generator", "kronecker", "r", "mu", "sigma", "loglik", "aic", "bic"]


def cmd_fit_weighted(args) -> int:
    gen = builtin_generator(args.generator)
    kronecker = args.kronecker or gen.label == "weighted-lindley"
    data = read_dataset(args.file, column=args.column, domain=POSITIVE_HALF_LINE)
    if args.r is not None:
        res = fit_weighted_exp_variant(data.sample, gen, kronecker, r=args.r)
    else:
        res = fit_weighted(data.sample, gen, kronecker)
    rows = [{
        "generator": gen.label, "kronecker": kronecker, "r": args.r,
        "mu": res.params.mu, "sigma": res.params.sigma,
        "loglik": res.loglik, "aic": res.aic, "bic": res.bic,
    }]
    out = _out_path(args.output, "weighted_fit", args.json)
    _emit(rows, WEIGHTED_FIELDS, out, args.json)
    _print_table(rows, WEIGHTED_FIELDS)
    print(f"wrote {out}")
    return 0


FREQ_FIELDS = ["alpha", "beta", "n", "r", "s", "count", "share"]


def cmd_profile_freq(args) -> int:
    scenarios = parse_scenarios(args.scenarios)
    sizes = _parse_int_list(args.n)
    grid = parse_grid(args.grid)
    rows = []
    for a, b in scenarios:
        for n in sizes:
            sc = montecarlo.Scenario(a, b, n, replications=args.reps, seed=args.seed)
            table = montecarlo.profile_frequencies(sc, grid)
            for (r, s), count in sorted(table.counts.items()):
                rows.append({"alpha": a, "beta": b, "n": n, "r": r, "s": s,
                             "count": count, "share": count / table.successes})
            mr, ms = table.modal_point
            print(f"scenario ({a:g},{b:g}) n={n}: modal (r,s)=({mr:g},{ms:g}) "
                  f"share {table.modal_share:.4f} over {table.successes} replications"
                  + (f" ({table.failures} failures)" if table.failures else ""))
    out = _out_path(args.output, "profile_frequencies", args.json)
    _emit(rows, FREQ_FIELDS, out, args.json, float_format="%.4f")
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="closedfit",
        description="Closed-form and maximum-likelihood fitting for beta and "
                    "weighted exponential-family distributions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_output=True):
        p.add_argument("--seed", type=int, default=0, help="master RNG seed (default 0)")
        if with_output:
            p.add_argument("-o", "--output", help="output file path")
            p.add_argument("--json", action="store_true",
                           help="write JSON instead of CSV (same schema)")

    p = sub.add_parser("fit", help="fit the beta model with the requested estimators")
    p.add_argument("file", help="CSV dataset of values in (0,1)")
    p.add_argument("--estimators", default=",".join(ALL_ESTIMATORS),
                   help="comma-separated subset of ml,chen-xiao,tamae,proposed")
    p.add_argument("--grid", help="profile grid as rmin:rmax:step,smin:smax:step")
    p.add_argument("--level", type=float, default=0.95,
                   help="Wald confidence level (default 0.95)")
    p.add_argument("--column", help="dataset column to read")
    p.add_argument("--plot", action="store_true",
                   help="also render a density-overlay figure next to the report")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="Monte Carlo benchmark of the estimators")
    p.add_argument("--scenarios", default=DEFAULT_SCENARIOS,
                   help="semicolon-separated alpha,beta pairs")
    p.add_argument("--n", default="10,20,50,100", help="comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=1000, help="replications per scenario")
    p.add_argument("--estimators", default=",".join(ALL_ESTIMATORS))
    p.add_argument("--grid", help="profile grid spec")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("envelope", help="simulated QQ envelope under a fitted model")
    p.add_argument("file", help="CSV dataset of values in (0,1)")
    p.add_argument("--sims", type=int, default=1000, help="number of simulated samples")
    p.add_argument("--method", default="ml", choices=ALL_ESTIMATORS,
                   help="estimator providing the fitted model (default ml)")
    p.add_argument("--grid", help="profile grid spec (for --method proposed)")
    p.add_argument("--column", help="dataset column to read")
    p.add_argument("--plot", action="store_true",
                   help="also render the QQ-envelope figure next to the report")
    common(p)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("fit-weighted", help="fit a weighted exponential-family model")
    p.add_argument("file", help="CSV dataset of positive values")
    p.add_argument("--generator", required=True,
                   help="generator name: gamma, nakagami, weighted-lindley, inverse")
    p.add_argument("--kronecker", action="store_true",
                   help="use the a=b branch (implied for weighted-lindley)")
    p.add_argument("--r", type=float,
                   help="use the exp(rx)-1 variant with this r instead of the power form")
    p.add_argument("--column", help="dataset column to read")
    common(p)
    p.set_defaults(func=cmd_fit_weighted)

    p = sub.add_parser("profile-freq", help="profile-selection frequency tables")
    p.add_argument("--scenarios", default=DEFAULT_SCENARIOS)
    p.add_argument("--n", default="100", help="comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--grid", help="profile grid spec")
    common(p)
    p.set_defaults(func=cmd_profile_freq)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, EstimationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
