"""Deterministic parameter sweeps over the analytic model.

A sweep varies one scenario knob over a value grid, optionally crossed
with a grid of mean inter-blockage intervals, and reports the long-run
throughput statistics per point. Rows come out in a fixed order
(inter-blockage slice outer, swept value inner) and serialize to CSV
with ``repr`` floats, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import probability
from .chain import build_chain, stationary
from .metrics import summarize
from .scenario import ConfigError, Scenario, ScenarioConfig, validate
from .simulate import simulate_chain

SWEEPABLE = ("a_factor", "ssi", "v", "mu")
CSV_HEADER = "param,mu_s,mean_bps,std_bps,variance,pi_B,p_C"


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter, its value grid, and optional mu cross-grid."""

    parameter: str
    values: tuple[float, ...]
    mu_values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        bad = []
        if self.parameter not in SWEEPABLE:
            bad.append(f"parameter: expected one of {SWEEPABLE}, "
                       f"got {self.parameter!r}")
        if not self.values:
            bad.append("values: at least one value required")
        if self.parameter == "mu" and self.mu_values:
            bad.append("mu_values: cannot cross mu with itself")
        if bad:
            raise ConfigError(bad)


@dataclass(frozen=True)
class SweepRow:
    """Statistics for one (mu, value) grid point."""

    param: float
    mu_s: float
    mean_bps: float
    std_bps: float
    variance: float
    pi_b: float
    p_c: float


def _apply(config: ScenarioConfig, parameter: str, value: float,
           ) -> ScenarioConfig:
    if parameter == "a_factor":
        return replace(config, queue=replace(config.queue, a_factor=value))
    if parameter == "ssi":
        return replace(config, sweep=replace(config.sweep, ssi=value))
    if parameter == "v":
        return replace(config, blockage=replace(config.blockage, v=value))
    return replace(config, blockage=replace(config.blockage, mu=value))


def run_sweep(config: ScenarioConfig, spec: SweepSpec, mode: str = "analytic",
              seed: int = 0, n_slots: int = 200_000) -> tuple[SweepRow, ...]:
    """Evaluate the grid and return rows in deterministic order.

    ``analytic`` rows use the stationary distribution and ignore the
    seed; ``simulate`` rows run the slot-level chain simulator with a
    per-row seed of ``seed`` plus the 0-based row index.

    Raises:
        ValueError: unknown mode.
        ConfigError: a grid point fails scenario validation.
    """
    if mode not in ("analytic", "simulate"):
        raise ValueError(f"mode must be 'analytic' or 'simulate', got {mode!r}")
    mu_slices: tuple[float | None, ...] = spec.mu_values or (None,)
    rows = []
    row_index = 0
    for mu in mu_slices:
        sliced = config if mu is None else _apply(config, "mu", mu)
        for value in spec.values:
            point = _apply(sliced, spec.parameter, value)
            scenario = validate(point)
            rows.append(_evaluate(scenario, value, mode, seed + row_index,
                                  n_slots))
            row_index += 1
    return tuple(rows)


def _evaluate(scenario: Scenario, value: float, mode: str, seed: int,
              n_slots: int) -> SweepRow:
    chain = build_chain(scenario)
    blockage = scenario.config.blockage
    p_c = probability.sweep_preemption_probability(
        blockage.mu, blockage.sigma, scenario.config.sweep.ssi)
    if mode == "analytic":
        pi = stationary(chain)
        summary = summarize(pi, chain.throughput_per_state)
        pi_b = float(pi[-1])
        mean, variance, std = summary.mean, summary.variance, summary.std_dev
    else:
        result = simulate_chain(chain, n_slots, seed=seed,
                                slot=scenario.config.timing.slot)
        mean, variance = result.mean_bps, result.variance_bps2
        std = math.sqrt(variance)
        pi_b = float(result.occupancy[-1])
    return SweepRow(param=value, mu_s=blockage.mu, mean_bps=mean,
                    std_bps=std, variance=variance, pi_b=pi_b, p_c=p_c)


def rows_to_csv(rows: tuple[SweepRow, ...]) -> str:
    """Serialize rows with ``repr`` floats for exact reproducibility."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join(repr(x) for x in (
            r.param, r.mu_s, r.mean_bps, r.std_bps, r.variance,
            r.pi_b, r.p_c)))
    return "\n".join(lines) + "\n"
