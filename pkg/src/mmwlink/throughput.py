"""Per-state throughput of the link and the cost of a blockage episode.

Each sector state serves a fluid arrival stream through an
access-then-transmit cycle. While the steady-state queue level stays at
or below the maximum aggregated frame, the link keeps up and delivers
exactly the offered load; beyond that the cycle saturates at the
full-aggregation capacity of the state's PHY rate. A blockage episode
additionally accumulates a backlog that must be drained after the link
recovers, which stretches the episode's effective duration and sets the
throughput attributed to the blocked state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class StateThroughput:
    """Queue level, saturation flag and achieved rate of one sector state.

    ``saturated`` means the steady-state queue would exceed the maximum
    aggregated frame, so the queue grows to its capacity ``q`` and the
    link delivers ``capacity`` instead of the offered load.
    """

    q_l: float
    saturated: bool
    throughput: float
    capacity: float


@dataclass(frozen=True)
class BlockageOutcome:
    """Aggregate effect of one blockage episode.

    ``t_b_mean`` is the recovery-weighted mean of the per-state episode
    durations in ``t_b_per_state`` (physical obstruction plus backlog
    drain); ``thp_b`` is the bits moved during the episode divided by
    its duration, averaged the same way.
    """

    thp_b: float
    t_b_mean: float
    t_b_per_state: tuple[float, ...]
    drained_new_data: tuple[float, ...]


def queue_fixed_point(l: float, mcs: float, t_acc: float, f: float,
                      q: float) -> tuple[float, bool]:
    """Steady-state queue level of the access-transmit recursion.

    Each cycle the queue refills for the previous transmission time plus
    the access time, all inflated by the sweep overhead ``f``. The
    recursion q_next = (q_prev/mcs + t_acc) * f * l converges iff
    f*l < mcs; the limit is returned when it also fits the queue,
    otherwise the queue is pinned at its capacity and the saturation
    flag is set. Saturation is a result, not an error.
    """
    if l == 0.0:
        return 0.0, False
    if f * l >= mcs:
        return q, True
    level = t_acc * f * l / (1.0 - f * l / mcs)
    if level > q:
        return q, True
    return level, False


def aggregation_capacity(mcs: float, t_acc: float, f: float,
                         a_max: float) -> float:
    """Delivered rate when every transmission carries a full a_max frame."""
    return a_max / ((a_max / mcs + t_acc) * f)


def state_throughput(l: float, mcs: float, t_acc: float, f: float,
                     a_max: float, q: float) -> StateThroughput:
    """Achieved rate of a sector state under offered load ``l``.

    While the steady-state queue level stays at or below ``a_max`` the
    link transmits everything that arrives and the throughput is the
    load itself. A higher fixed point means arrivals outpace what an
    a_max-sized frame per cycle can carry, so the queue fills to ``q``
    and the state delivers its full-aggregation capacity.
    """
    level, overflow = queue_fixed_point(l, mcs, t_acc, f, q)
    capacity = aggregation_capacity(mcs, t_acc, f, a_max)
    if not overflow and level <= a_max:
        return StateThroughput(q_l=level, saturated=False, throughput=l,
                               capacity=capacity)
    return StateThroughput(q_l=q, saturated=True, throughput=capacity,
                           capacity=capacity)


def blockage_effect(t: float, l: float, q: float,
                    capacities: Sequence[float],
                    p_recover: Sequence[float]) -> BlockageOutcome:
    """Throughput and effective duration of a blockage episode.

    During the physical obstruction of length ``t`` the queue absorbs
    arrivals up to its capacity ``q``. Once the link recovers into
    state j, the backlog drains at that state's full-aggregation
    capacity minus the still-arriving load; fresh arrivals during the
    drain extend it. States whose capacity cannot even cover the load
    never drain, contribute zero rate, and end their episode with the
    obstruction itself.

    Raises:
        ValueError: mismatched sequence lengths or non-positive t.
    """
    if len(capacities) != len(p_recover):
        raise ValueError(
            f"capacities ({len(capacities)}) and p_recover "
            f"({len(p_recover)}) must have equal length")
    if not t > 0.0:
        raise ValueError(f"blockage duration must be positive, got {t!r}")
    thp_b = 0.0
    t_b_mean = 0.0
    durations = []
    drained = []
    for cap, p in zip(capacities, p_recover):
        if cap <= l:
            duration = t
            new_data = 0.0
            rate = 0.0
        else:
            backlog = min(t * l, q)
            drain_time = backlog / (cap - l)
            new_data = l * drain_time
            duration = t + drain_time
            rate = (backlog + new_data) / duration
        durations.append(duration)
        drained.append(new_data)
        thp_b += p * rate
        t_b_mean += p * duration
    return BlockageOutcome(thp_b=thp_b, t_b_mean=t_b_mean,
                           t_b_per_state=tuple(durations),
                           drained_new_data=tuple(drained))
