"""Slot-level state chain of the link and its stationary distribution.

States are the best-aligned sector, the suboptimal sectors in
descending rate order, and finally the blocked state. Transitions per
slot: the aligned link holds until the next blockage; a suboptimal link
additionally races the periodic sweep, which rescues it back to the
best sector unless a blockage preempts the sweep; the blocked state
holds for the episode's effective duration and then recovers into one
of the sector states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .probability import sweep_preemption_probability
from .scenario import ConfigError, Scenario
from .throughput import blockage_effect, state_throughput

_ROW_SUM_TOL = 1e-12
_RESIDUAL_TOL = 1e-10


def state_labels(n_rates: int) -> tuple[str, ...]:
    """Labels for the rate ladder plus the blocked state."""
    subs = tuple(f"sub{i}" for i in range(1, n_rates))
    return ("best",) + subs + ("blocked",)


@dataclass(frozen=True)
class MarkovChain:
    """Row-stochastic slot transition matrix with per-state rates.

    The last state is the blocked one; its throughput entry carries the
    blockage-episode rate. Structural zeroes are enforced: the best
    state never moves to a suboptimal one directly, and suboptimal
    states only hold, recover to best, or get blocked.
    """

    labels: tuple[str, ...]
    matrix: np.ndarray
    throughput_per_state: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        thp = np.array(self.throughput_per_state, dtype=float)
        n = len(self.labels)
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match "
                             f"{n} labels")
        if thp.shape != (n,):
            raise ValueError(f"throughput vector length {thp.shape} does not "
                             f"match {n} labels")
        if np.any(m < 0.0) or np.any(m > 1.0):
            raise ValueError("transition probabilities must lie in [0, 1]")
        sums = m.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > _ROW_SUM_TOL):
            raise ValueError(f"rows must sum to 1 within {_ROW_SUM_TOL}, "
                             f"got sums {sums!r}")
        if np.any(m[0, 1:-1] != 0.0):
            raise ValueError("best state must carry no direct mass on "
                             "suboptimal states")
        for i in range(1, n - 1):
            off = [m[i, j] for j in range(n) if j not in (0, i, n - 1)]
            if any(x != 0.0 for x in off):
                raise ValueError(f"suboptimal state {i} may only hold, "
                                 "recover to best, or get blocked")
        m.setflags(write=False)
        thp.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "throughput_per_state", thp)

    @property
    def n_states(self) -> int:
        return len(self.labels)


def chain_from_rates(mean_uptime_slots: float, blocked_slots: float,
                     p_preempt: float, p_recover: Sequence[float],
                     throughput_per_state: Sequence[float],
                     labels: Sequence[str] | None = None) -> MarkovChain:
    """Assemble the chain from already-derived dwell and recovery terms.

    ``mean_uptime_slots`` is the mean number of slots until the next
    blockage; ``blocked_slots`` the mean effective blockage dwell (at
    least one slot); ``p_preempt`` the probability that a blockage
    preempts the rescuing sweep. A suboptimal state therefore dwells
    p_preempt * mean_uptime_slots slots on average (floored at one
    slot), leaves for the best state when the sweep wins the race, and
    gets blocked when it loses.

    This is also the entry point for empirically fitted models: pass
    p_preempt=1 when no periodic sweeps were observed.
    """
    if mean_uptime_slots <= 1.0:
        raise ConfigError(
            [f"mu: mean uptime must exceed one slot, got {mean_uptime_slots!r} slots"])
    if not 0.0 <= p_preempt <= 1.0:
        raise ConfigError([f"p_preempt: must lie in [0, 1], got {p_preempt!r}"])
    n_rates = len(p_recover)
    if labels is None:
        labels = state_labels(n_rates)
    n = n_rates + 1
    matrix = np.zeros((n, n))
    matrix[0, 0] = 1.0 - 1.0 / mean_uptime_slots
    matrix[0, n - 1] = 1.0 / mean_uptime_slots
    dwell = max(1.0, p_preempt * mean_uptime_slots)
    for i in range(1, n_rates):
        matrix[i, 0] = (1.0 - p_preempt) / dwell
        matrix[i, i] = 1.0 - 1.0 / dwell
        matrix[i, n - 1] = p_preempt / dwell
    hold = max(1.0, blocked_slots)
    matrix[n - 1, n - 1] = 1.0 - 1.0 / hold
    for j, p in enumerate(p_recover):
        matrix[n - 1, j] = (1.0 / hold) * p
    return MarkovChain(labels=tuple(labels), matrix=matrix,
                       throughput_per_state=np.asarray(throughput_per_state,
                                                       dtype=float))


def build_chain(scenario: Scenario) -> MarkovChain:
    """Build the chain for a validated scenario.

    Per-state rates come from the queue model at each PHY rate; the
    blocked state's rate and dwell come from the episode model, whose
    effective duration (obstruction plus backlog drain) also sets the
    blocked dwell so that occupancy-weighted averages stay consistent.
    """
    cfg = scenario.config
    slot = cfg.timing.slot
    mu_slots = cfg.blockage.mu / slot
    p_preempt = sweep_preemption_probability(cfg.blockage.mu,
                                             cfg.blockage.sigma,
                                             cfg.sweep.ssi)
    t_acc = scenario.t_access
    f = scenario.overhead
    load = scenario.load
    states = [state_throughput(load, mcs, t_acc, f, cfg.queue.a_max,
                               cfg.queue.q)
              for mcs in cfg.rates.mcs_levels]
    capacities = [s.capacity for s in states]
    episode = blockage_effect(scenario.block_duration, load, cfg.queue.q,
                              capacities, cfg.rates.p_recover)
    blocked_slots = max(episode.t_b_mean / slot, 1.0)
    thp = [s.throughput for s in states] + [episode.thp_b]
    return chain_from_rates(mu_slots, blocked_slots, p_preempt,
                            cfg.rates.p_recover, thp)


def stationary(chain: MarkovChain) -> np.ndarray:
    """Stationary distribution by direct linear solve.

    Solves pi P = pi with the normalization sum(pi) = 1 substituted for
    one balance equation. States made unreachable by the parameters
    simply receive zero mass.

    Raises:
        RuntimeError: singular system or residual above 1e-10.
    """
    p = chain.matrix
    n = p.shape[0]
    a = p.T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"stationary solve failed: {exc}") from exc
    if np.any(pi < -1e-12):
        raise RuntimeError(f"stationary solve produced negative mass: {pi!r}")
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    residual = float(np.max(np.abs(pi @ p - pi)))
    if residual > _RESIDUAL_TOL:
        raise RuntimeError(
            f"stationary residual {residual} exceeds {_RESIDUAL_TOL}")
    return pi


def transition_csv(chain: MarkovChain) -> str:
    """Debug dump of the transition matrix: one labeled row per state."""
    header = "state," + ",".join(chain.labels)
    lines = [header]
    for label, row in zip(chain.labels, chain.matrix):
        lines.append(label + "," + ",".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"
