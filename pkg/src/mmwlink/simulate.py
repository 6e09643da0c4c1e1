"""Seeded simulators: a slot walk on the chain and an event-level oracle.

The slot walk samples the built chain directly and checks occupancy and
rate statistics against the stationary solution. The event simulator
shares no mathematics with the chain: it draws explicit blockage
arrivals, schedules real sector sweeps that consume air time, and moves
integer bits through an access-transmit frame loop, providing an
independent cross-check of the preemption probability, the queue model
and the blockage-episode model.

Both simulators are deterministic for a fixed seed: every random draw
comes from one ``numpy.random.default_rng`` stream consumed in a fixed
documented order, and the inner loops run in kernels whose float
behavior is identical across the compiled and pure-Python backends.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .chain import MarkovChain
from .scenario import Scenario, ScenarioConfig, validate

DEFAULT_BIN_INTERVAL = 0.5


@dataclass(frozen=True)
class SimulationResult:
    """Outcome of one seeded run.

    ``occupancy`` is the fraction of time (or slots) spent per state,
    blocked state last. For the slot walk, ``variance_bps2`` is the
    per-slot rate variance, directly comparable to the analytic value;
    for the event simulator it is the variance over the binned series,
    since instantaneous rates do not exist there. ``series_times`` are
    bin start times; only complete bins are reported. The bit counters
    and the preemption fraction are event-simulator only.
    """

    seed: int
    duration: float
    occupancy: np.ndarray
    mean_bps: float
    variance_bps2: float
    series_times: np.ndarray
    series_bps: np.ndarray
    n_slots: int | None = None
    arrived_bits: int | None = None
    delivered_bits: int | None = None
    dropped_bits: int | None = None
    queue_bits_end: int | None = None
    preempt_fraction: float | None = None


def simulate_chain(chain: MarkovChain, n_slots: int, seed: int,
                   bin_interval: float = DEFAULT_BIN_INTERVAL,
                   slot: float = 1e-3) -> SimulationResult:
    """Random walk on the chain, one state per slot.

    Each slot credits its state's rate; the walk starts in the best
    state. Occupancy converges to the stationary distribution and the
    mean to the occupancy-weighted rate as ``n_slots`` grows.

    Raises:
        ValueError: n_slots < 1.
    """
    if n_slots < 1:
        raise ValueError(f"n_slots must be at least 1, got {n_slots!r}")
    n = chain.n_states
    rng = np.random.default_rng(seed)
    uniforms = rng.random(n_slots)
    cum = np.cumsum(chain.matrix, axis=1)
    cum[:, -1] = 2.0  # sentinel: the scan never walks past the last state
    bin_slots = max(int(round(bin_interval / slot)), 1)
    n_bins = n_slots // bin_slots
    state_counts = np.zeros(n, dtype=np.int64)
    bin_counts = np.zeros((n_bins, n), dtype=np.int64)
    _kernels.chain_walk(cum, 0, uniforms, bin_slots, state_counts, bin_counts)

    thp = chain.throughput_per_state
    occupancy = state_counts / n_slots
    mean = float(state_counts @ thp) / n_slots
    variance = float(state_counts @ (thp - mean) ** 2) / n_slots
    series_bps = (bin_counts @ thp) / bin_slots
    series_times = np.arange(n_bins) * (bin_slots * slot)
    return SimulationResult(seed=seed, duration=n_slots * slot,
                            occupancy=occupancy, mean_bps=mean,
                            variance_bps2=variance,
                            series_times=series_times, series_bps=series_bps,
                            n_slots=n_slots)


def _merge_intervals(intervals: list[tuple[float, float]]) -> list[tuple[float, float]]:
    merged: list[tuple[float, float]] = []
    for start, end in intervals:
        if merged and start <= merged[-1][1]:
            last_start, last_end = merged[-1]
            merged[-1] = (last_start, max(last_end, end))
        else:
            merged.append((start, end))
    return merged


def _draw_blockages(rng, mu: float, sigma: float, duration: float) -> list[float]:
    # Gaps are truncated at zero by redrawing, matching the preemption
    # probability's integration domain.
    onsets: list[float] = []
    t = 0.0
    while True:
        gap = rng.normal(mu, sigma)
        while gap <= 0.0:
            gap = rng.normal(mu, sigma)
        t += gap
        if t >= duration:
            return onsets
        onsets.append(t)


def _preempt_fraction(onsets: list[float], sweep_times: list[float],
                      ssi: float) -> float | None:
    """Fraction of consecutive blockage pairs with no sweep in between."""
    if len(onsets) < 2:
        return None
    if math.isinf(ssi):
        return 1.0
    wins = 0
    for a, b in zip(onsets, onsets[1:]):
        lo = bisect_right(sweep_times, a)
        if lo >= len(sweep_times) or sweep_times[lo] >= b:
            wins += 1
    return wins / (len(onsets) - 1)


def simulate_events(config: ScenarioConfig | Scenario, sim_duration: float,
                    seed: int,
                    bin_interval: float = DEFAULT_BIN_INTERVAL) -> SimulationResult:
    """Event-level run with explicit blockages, sweeps and framing.

    Timeline model: blockage onsets arrive with truncated-Gaussian gaps
    and each obstructs the link for its physical crossing time; sector
    sweeps start at a uniformly drawn phase offset and recur every ssi,
    each consuming t_sweep of air time; a sweep whose end falls inside
    an obstruction re-steers against a blocked channel and is
    ineffective, otherwise it restores the best sector. When an
    obstruction ends, the sector is drawn from the recovery weights.
    Between those events the link runs access-transmit cycles against a
    fluid arrival stream at the derived offered load, with integer-bit
    accounting: arrived == delivered + dropped + final queue, exactly.

    Randomness order per seed: sweep phase (finite ssi only), then
    blockage gaps, then one recovery draw per merged obstruction.

    Raises:
        ValueError: non-positive duration.
    """
    scen = config if isinstance(config, Scenario) else validate(config)
    cfg = scen.config
    duration = float(sim_duration)
    if not duration > 0.0:
        raise ValueError(f"sim_duration must be positive, got {sim_duration!r}")

    load = scen.load
    t_phys = scen.block_duration
    t_acc = scen.t_access
    ssi = cfg.sweep.ssi
    t_sweep = cfg.timing.t_sweep
    mcs = cfg.rates.mcs_levels
    n_rates = len(mcs)
    a_max_bits = int(round(cfg.queue.a_max))
    q_bits = int(round(cfg.queue.q))

    rng = np.random.default_rng(seed)
    if math.isinf(ssi):
        sweep_starts: list[float] = []
    else:
        phase = float(rng.uniform(0.0, ssi))
        n_sweeps = int(math.ceil((duration - phase) / ssi)) if phase < duration else 0
        sweep_starts = [phase + k * ssi for k in range(max(n_sweeps, 0))]
        sweep_starts = [s for s in sweep_starts if s < duration]
    onsets = _draw_blockages(rng, cfg.blockage.mu, cfg.blockage.sigma, duration)
    blocked = _merge_intervals([(b, min(b + t_phys, duration)) for b in onsets])
    cum_recover = np.cumsum(cfg.rates.p_recover)
    recovery: list[int] = []
    for _ in blocked:
        u = rng.random()
        j = int(np.searchsorted(cum_recover, u, side="right"))
        recovery.append(min(j, n_rates - 1))

    sweeps = [(s, min(s + t_sweep, duration)) for s in sweep_starts]
    blocked_starts = [b[0] for b in blocked]

    def in_blocked(x: float) -> bool:
        i = bisect_right(blocked_starts, x) - 1
        return i >= 0 and x < blocked[i][1]

    # Atomic segments between consecutive event boundaries; obstruction
    # wins the classification where it overlaps a sweep.
    points = {0.0, duration}
    for s, e in blocked:
        points.add(s)
        points.add(e)
    for s, e in sweeps:
        points.add(s)
        points.add(e)
    boundaries = sorted(points)

    blocked_ends = {e: i for i, (_, e) in enumerate(blocked)}
    sweep_ends = {e for _, e in sweeps}
    sweep_start_set = [s for s, _ in sweeps]

    def in_sweep(x: float) -> bool:
        i = bisect_right(sweep_start_set, x) - 1
        return i >= 0 and x < sweeps[i][1]

    bin_len = float(bin_interval)
    n_bins = int(duration / bin_len)
    bins = np.zeros(n_bins, dtype=np.int64)
    counters = np.zeros(3, dtype=np.int64)
    occupancy_time = np.zeros(n_rates + 1, dtype=float)

    queue = 0
    sector = 0
    for left, right in zip(boundaries, boundaries[1:]):
        if left >= duration:
            break
        span = right - left
        if in_blocked(left):
            occupancy_time[n_rates] += span
            arr = int(load * span + 0.5)
            counters[0] += arr
            space = q_bits - queue
            if arr > space:
                counters[2] += arr - space
                arr = space
            queue += arr
        elif in_sweep(left):
            occupancy_time[sector] += span
            arr = int(load * span + 0.5)
            counters[0] += arr
            space = q_bits - queue
            if arr > space:
                counters[2] += arr - space
                arr = space
            queue += arr
        else:
            occupancy_time[sector] += span
            queue = int(_kernels.serve_frames(queue, left, right, load,
                                              mcs[sector], t_acc, a_max_bits,
                                              q_bits, bin_len, bins, counters))
        # State updates at the segment's right edge: recovery first,
        # then an effective sweep end overrides it.
        if right in blocked_ends:
            sector = recovery[blocked_ends[right]]
        if right in sweep_ends and not in_blocked(right):
            sector = 0

    arrived = int(counters[0])
    delivered = int(counters[1])
    dropped = int(counters[2])
    mean = delivered / duration
    rates = bins.astype(float) / bin_len
    variance = float(((rates - rates.mean()) ** 2).mean()) if n_bins else 0.0
    series_times = np.arange(n_bins) * bin_len
    return SimulationResult(
        seed=seed, duration=duration, occupancy=occupancy_time / duration,
        mean_bps=mean, variance_bps2=variance, series_times=series_times,
        series_bps=rates, arrived_bits=arrived, delivered_bits=delivered,
        dropped_bits=dropped, queue_bits_end=queue,
        preempt_fraction=_preempt_fraction(onsets, sweep_start_set, ssi))


def series_csv(result: SimulationResult) -> str:
    """Binned throughput series as CSV (header ``time_s,throughput_bps``)."""
    lines = ["time_s,throughput_bps"]
    for t, r in zip(result.series_times, result.series_bps):
        lines.append(f"{repr(float(t))},{repr(float(r))}")
    return "\n".join(lines) + "\n"
