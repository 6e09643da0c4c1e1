"""Command-line front end.

Subcommands:

* ``sweep``      — deterministic parameter sweep, CSV to stdout or a file.
* ``simulate``   — one Monte Carlo run (event or slot engine); the
                   binned throughput series goes to stdout or a file,
                   a human-readable summary to stderr.
* ``trace-fit``  — fit rate levels and recovery weights to a measured
                   trace and emit a config fragment.
* ``pc``         — sweep-preemption probability, closed form next to a
                   Monte Carlo check.

Exit codes: 0 on success, 2 for configuration or input-format errors
(argparse uses the same code for usage errors), 3 for I/O failures.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import probability
from .chain import build_chain, state_labels, stationary
from .metrics import summarize
from .scenario import ConfigError, ScenarioConfig, load_config, validate
from .simulate import series_csv, simulate_chain, simulate_events
from .sweep import SWEEPABLE, SweepSpec, rows_to_csv, run_sweep
from .trace import TraceFormatError, extract_levels, load_trace, to_config_fragment


def _parse_range(text: str) -> tuple[float, ...]:
    """Expand ``min:max:count`` or ``min:max:count:log`` into a grid."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise argparse.ArgumentTypeError(
            f"expected min:max:count[:log], got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected numeric min:max:count, got {text!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError(f"count must be positive, got {count}")
    if len(parts) == 4:
        if lo <= 0.0 or hi <= 0.0:
            raise argparse.ArgumentTypeError(
                "log spacing needs positive endpoints")
        grid = np.logspace(math.log10(lo), math.log10(hi), count)
    else:
        grid = np.linspace(lo, hi, count)
    return tuple(float(x) for x in grid)


def _parse_values(text: str) -> tuple[float, ...]:
    """Parse a comma-separated float list (``inf`` allowed)."""
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}") from None


def _load_config(args: argparse.Namespace) -> ScenarioConfig:
    if args.config is None:
        return ScenarioConfig()
    return load_config(args.config)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args)
    values = args.values if args.values is not None else args.range
    if values is None:
        raise ConfigError(["values: provide --values or --range"])
    mu_values: tuple[float, ...] = ()
    if args.mu_values is not None:
        mu_values = args.mu_values
    elif args.mu_range is not None:
        mu_values = args.mu_range
    spec = SweepSpec(parameter=args.parameter, values=values,
                     mu_values=mu_values)
    rows = run_sweep(config, spec, mode=args.mode, seed=args.seed,
                     n_slots=args.n_slots)
    _emit(rows_to_csv(rows), args.out)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args)
    if args.engine == "events":
        result = simulate_events(config, args.duration, seed=args.seed,
                                 bin_interval=args.bin_interval)
    else:
        scenario = validate(config)
        slot = config.timing.slot
        n_slots = max(int(round(args.duration / slot)), 1)
        chain = build_chain(scenario)
        result = simulate_chain(chain, n_slots, seed=args.seed,
                                bin_interval=args.bin_interval, slot=slot)
    _emit(series_csv(result), args.out)
    labels = state_labels(len(config.rates.mcs_levels))
    total = float(result.occupancy.sum())
    occ = ", ".join(f"{lab}={result.occupancy[i] / total:.4f}"
                    for i, lab in enumerate(labels))
    print(f"engine={args.engine} seed={result.seed} "
          f"duration_s={result.duration}", file=sys.stderr)
    print(f"mean_bps={result.mean_bps!r} "
          f"std_bps={math.sqrt(result.variance_bps2)!r}", file=sys.stderr)
    print(f"occupancy: {occ}", file=sys.stderr)
    if result.arrived_bits is not None:
        print(f"arrived_bits={result.arrived_bits} "
              f"delivered_bits={result.delivered_bits} "
              f"dropped_bits={result.dropped_bits} "
              f"queue_bits_end={result.queue_bits_end}", file=sys.stderr)
    if result.preempt_fraction is not None:
        print(f"preempt_fraction={result.preempt_fraction!r}",
              file=sys.stderr)
    return 0


def _cmd_trace_fit(args: argparse.Namespace) -> int:
    trace = load_trace(args.trace)
    try:
        model = extract_levels(trace, max_levels=args.max_levels,
                               blockage_threshold=args.threshold)
    except ValueError as exc:
        raise TraceFormatError(str(exc)) from exc
    _emit(to_config_fragment(model), args.out)
    return 0


def _cmd_pc(args: argparse.Namespace) -> int:
    closed = probability.sweep_preemption_probability(args.mu, args.sigma,
                                                      args.ssi)
    estimate, std_error = probability.sweep_preemption_mc(
        args.mu, args.sigma, args.ssi, n_samples=args.samples, seed=args.seed)
    print(f"closed_form = {closed!r}")
    print(f"mc_estimate = {estimate!r}")
    print(f"mc_std_error = {std_error!r}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = _load_config(args)
    scenario = validate(config)
    chain = build_chain(scenario)
    pi = stationary(chain)
    summary = summarize(pi, chain.throughput_per_state)
    print(f"load_bps = {scenario.load!r}")
    print(f"mean_bps = {summary.mean!r}")
    print(f"std_bps = {summary.std_dev!r}")
    print(f"variance = {summary.variance!r}")
    for label, mass, thp in zip(chain.labels, pi, chain.throughput_per_state):
        print(f"pi[{label}] = {float(mass)!r}  rate_bps = {float(thp)!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmwlink",
        description="Throughput statistics for a mm-wave link under "
                    "transient blockage and periodic sector sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser(
        "sweep", help="evaluate a parameter grid and print CSV")
    p_sweep.add_argument("--config", default=None,
                         help="scenario config file (key = value lines)")
    p_sweep.add_argument("--parameter", required=True, choices=SWEEPABLE)
    p_sweep.add_argument("--values", type=_parse_values, default=None,
                         help="comma-separated grid values")
    p_sweep.add_argument("--range", type=_parse_range, default=None,
                         help="min:max:count[:log] grid")
    p_sweep.add_argument("--mu-values", type=_parse_values, default=None,
                         help="comma-separated mean inter-blockage values (s)")
    p_sweep.add_argument("--mu-range", type=_parse_range, default=None,
                         help="min:max:count[:log] inter-blockage grid")
    p_sweep.add_argument("--mode", choices=("analytic", "simulate"),
                         default="analytic")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--n-slots", type=int, default=200_000,
                         help="slots per point in simulate mode")
    p_sweep.add_argument("--out", default=None, help="output CSV path")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_sim = sub.add_parser(
        "simulate", help="run one seeded simulation and print the series")
    p_sim.add_argument("--config", default=None)
    p_sim.add_argument("--engine", choices=("events", "chain"),
                       default="events")
    p_sim.add_argument("--duration", type=float, default=60.0,
                       help="simulated seconds")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--bin-interval", type=float, default=0.5,
                       help="series bin width in seconds")
    p_sim.add_argument("--out", default=None, help="series CSV path")
    p_sim.set_defaults(func=_cmd_simulate)

    p_fit = sub.add_parser(
        "trace-fit", help="fit rate levels to a measured throughput trace")
    p_fit.add_argument("trace", help="CSV trace (time_s,throughput_bps)")
    p_fit.add_argument("--max-levels", type=int, default=6)
    p_fit.add_argument("--threshold", type=float, default=0.3,
                       help="blockage cutoff as a fraction of the trace max")
    p_fit.add_argument("--out", default=None, help="config fragment path")
    p_fit.set_defaults(func=_cmd_trace_fit)

    p_pc = sub.add_parser(
        "pc", help="sweep-preemption probability: closed form vs Monte Carlo")
    p_pc.add_argument("--mu", type=float, required=True,
                      help="mean inter-blockage interval (s)")
    p_pc.add_argument("--sigma", type=float, required=True,
                      help="inter-blockage standard deviation (s)")
    p_pc.add_argument("--ssi", type=float, required=True,
                      help="sweep interval (s); inf means never")
    p_pc.add_argument("--samples", type=int, default=100_000)
    p_pc.add_argument("--seed", type=int, default=0)
    p_pc.set_defaults(func=_cmd_pc)

    p_an = sub.add_parser(
        "analyze", help="stationary statistics for one scenario")
    p_an.add_argument("--config", default=None)
    p_an.set_defaults(func=_cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, TraceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
