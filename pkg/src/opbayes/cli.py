"""Command-line entry point: ``opbayes <command> ...``.

Commands
--------
fit-prior      Gamma prior from a mean plus interval probability, from a mean
               plus coefficient of variation, or from industry samples.
trajectory     Estimator path (Bayes with experts, Bayes without experts, MLE)
               as CSV, one row per observation count k = 0..K.
simulate-var   Predictive VaR per cell and their sum.
sample-gig     GIG(nu, omega, phi) draws, one per line.

Exit codes: 0 success, 1 runtime / domain error, 2 usage error. Diagnostics
go to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import (
    PriorConstraint,
    fit_gamma_from_constraint,
    fit_gamma_moments,
    gamma_from_mean_vco,
)
from .capital import (
    AGGREGATION_NOTE,
    CellModel,
    aggregate_var_sum,
    empirical_var,
    simulate_annual_losses,
)
from .gig import GigParams, gig_sample
from .io import (
    FREQUENCY,
    LOGNORMAL,
    ConfigError,
    config_from_mapping,
    load_cell_config,
    read_key_values,
    read_samples,
)
from .trajectory import frequency_trajectory, lognormal_trajectory, pareto_trajectory


class UsageError(Exception):
    pass


def _number(text: str) -> float:
    """Float or exact fraction such as ``2/3``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _interval(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"interval must be LOW,HIGH, got {text!r}")
    return _number(parts[0]), _number(parts[1])


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


# ---------------------------------------------------------------------------


def cmd_fit_prior(args, out) -> None:
    if args.samples:
        if args.mean is not None or args.vco is not None or args.interval or args.prob is not None:
            raise UsageError("--samples cannot be combined with --mean/--vco/--interval/--prob")
        params = fit_gamma_moments(read_samples(args.samples))
    else:
        if args.mean is None:
            raise UsageError("need --mean (with --vco or --interval/--prob) or --samples")
        if args.vco is not None:
            if args.interval or args.prob is not None:
                raise UsageError("--vco cannot be combined with --interval/--prob")
            params = gamma_from_mean_vco(args.mean, args.vco)
        elif args.interval and args.prob is not None:
            try:
                constraint = PriorConstraint(args.mean, *args.interval, args.prob)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            params = fit_gamma_from_constraint(constraint)
        else:
            raise UsageError("--mean needs either --vco or both --interval and --prob")
    out.write("prior = gamma\n")
    out.write(f"alpha0 = {params.shape!r}\n")
    out.write(f"beta0 = {params.scale!r}\n")


def cmd_trajectory(args, out) -> None:
    cfg = read_key_values(args.config)
    if args.data is not None:
        cfg["data"] = str(Path(args.data).resolve())
    if args.experts is not None:
        cfg["experts"] = str(Path(args.experts).resolve())
    config = config_from_mapping(cfg, args.config)
    data = config.load_data()
    panel = config.panel(config.load_experts())
    if config.kind == FREQUENCY:
        rows = frequency_trajectory(config.prior, config.volume, data, panel)
    elif config.kind == LOGNORMAL:
        rows = lognormal_trajectory(config.prior, config.obs_sigma, data, panel)
    else:
        rows = pareto_trajectory(config.prior, config.threshold, data, panel)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["k", "bayes", "two_source", "mle"])
    for row in rows:
        writer.writerow([row.k, _fmt(row.bayes), _fmt(row.two_source), _fmt(row.mle)])


def load_cell_model(path) -> CellModel:
    """A cell file names a frequency config and a severity config."""
    path = Path(path)
    keys = read_key_values(path)
    unknown = sorted(set(keys) - {"name", "frequency", "severity"})
    if unknown:
        raise ConfigError(f"{path}: unknown keys {', '.join(unknown)}")
    try:
        freq_cfg = load_cell_config(path.parent / keys["frequency"])
        sev_cfg = load_cell_config(path.parent / keys["severity"])
    except KeyError as exc:
        raise ConfigError(f"{path}: missing key {exc.args[0]!r}") from None
    if freq_cfg.kind != FREQUENCY:
        raise ConfigError(f"{path}: 'frequency' must point at a {FREQUENCY} config")
    if sev_cfg.kind == FREQUENCY:
        raise ConfigError(f"{path}: 'severity' must point at a severity config")
    return CellModel(freq_cfg.build_state(), sev_cfg.build_state(), keys.get("name", path.stem))


def cmd_simulate_var(args, out) -> None:
    if not 0.0 < args.level < 1.0:
        raise UsageError(f"--level must lie in (0, 1), got {args.level}")
    if args.sims < 1:
        raise UsageError("--sims must be >= 1")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    cells = [load_cell_model(p) for p in args.cells]
    root = np.random.SeedSequence(args.seed)
    estimates = []
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["cell", "level", "var", "n_sims", "note"])
    for cell, seq in zip(cells, root.spawn(len(cells))):
        sims = simulate_annual_losses(
            cell, args.sims, seq,
            parameter_uncertainty=not args.no_parameter_uncertainty,
            workers=args.workers,
        )
        est = empirical_var(sims, args.level)
        estimates.append(est)
        writer.writerow([cell.name, repr(args.level), repr(est.value), est.n_sims,
                         est.standard_error_note])
    writer.writerow(["SUM", repr(args.level), repr(aggregate_var_sum(estimates)),
                     args.sims, AGGREGATION_NOTE])


def cmd_sample_gig(args, out) -> None:
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    try:
        params = GigParams(args.nu, args.omega, args.phi)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rng = np.random.default_rng(args.seed)
    draws = gig_sample(params, rng, args.n) if args.n else []
    out.write("".join(f"{x!r}\n" for x in map(float, draws)))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opbayes",
        description="Combine internal losses, external priors and expert opinions "
                    "into operational-risk posteriors.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-prior", help="fit a Gamma prior")
    p.add_argument("--mean", type=_number)
    p.add_argument("--interval", type=_interval, help="LOW,HIGH")
    p.add_argument("--prob", type=_number, help="P[LOW <= X <= HIGH], e.g. 2/3")
    p.add_argument("--vco", type=_number, help="coefficient of variation")
    p.add_argument("--samples", type=Path, help="CSV id,value of industry estimates")
    p.set_defaults(func=cmd_fit_prior)

    p = sub.add_parser("trajectory", help="estimator path as CSV")
    p.add_argument("config", type=Path)
    p.add_argument("--data", type=Path, help="counts or losses CSV (overrides config)")
    p.add_argument("--experts", type=Path, help="experts CSV (overrides config)")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("simulate-var", help="predictive VaR per cell and summed")
    p.add_argument("cells", nargs="+", type=Path, help="cell files")
    p.add_argument("--level", type=_number, default=0.999)
    p.add_argument("--sims", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-parameter-uncertainty", action="store_true",
                   help="fix parameters at their posterior means")
    p.set_defaults(func=cmd_simulate_var)

    p = sub.add_parser("sample-gig", help="draw from GIG(nu, omega, phi)")
    p.add_argument("--nu", type=_number, required=True)
    p.add_argument("--omega", type=_number, required=True)
    p.add_argument("--phi", type=_number, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample_gig)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad flags
    buffer = io.StringIO()
    try:
        args.func(args, buffer)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"opbayes {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, RuntimeError, ArithmeticError) as exc:
        print(f"opbayes {args.command}: error: {exc}", file=sys.stderr)
        return 1
    out.write(buffer.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
