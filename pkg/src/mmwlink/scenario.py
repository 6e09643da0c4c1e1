"""Link scenario parameters and the quantities derived from them.

A scenario bundles everything needed to characterize one mm-wave link:
MAC timing constants, the statistics and geometry of transient blockage
events (a person crossing the beam), the ladder of sector states with
their PHY rates and recovery probabilities, transmit-queue limits, and
the periodic sector-sweep schedule.

All values are SI base units throughout (seconds, bits, bits/second,
radians). Dataclasses carry no validation of their own so that partial
or degenerate parameter sets can still be constructed and inspected;
:func:`validate` enforces every invariant in one place and attaches the
derived quantities (physical block duration, channel access time, sweep
overhead factor, offered load).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Iterable

DEFAULT_MCS_LEVELS = (3.85e9, 1.925e9, 1.155e9)
DEFAULT_P_RECOVER = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


class ConfigError(ValueError):
    """One or more scenario invariants are violated.

    ``violations`` holds one human-readable message per violated
    invariant, each prefixed with the offending field name.
    """

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class TimingParams:
    """MAC-layer timing constants.

    ``slot`` is the discretization step of the state chain, not a MAC
    quantity; ``t_slot_mac`` is the CSMA/CA backoff slot.
    """

    t_difs: float = 13e-6
    t_sifs: float = 3e-6
    t_ack: float = 6e-6
    t_slot_mac: float = 5e-6
    cw_min: int = 15
    t_sweep: float = 4e-3
    slot: float = 1e-3


@dataclass(frozen=True)
class BlockageProcess:
    """Statistics and geometry of transient link blockage.

    Inter-blockage gaps are normally distributed with mean ``mu`` and
    standard deviation ``sigma`` (seconds). A blocker crosses the beam
    of width ``alpha`` radians at distance ``d`` meters from the
    transmitter, moving at ``v`` m/s.
    """

    mu: float = 10.0
    sigma: float = 0.1
    alpha: float = math.radians(20.0)
    d: float = 1.5
    v: float = 1.0


@dataclass(frozen=True)
class LinkRates:
    """Sector-state rate ladder and post-blockage recovery weights.

    ``mcs_levels[0]`` is the rate of the best-aligned state; the
    remaining entries are the suboptimal sector states in descending
    rate order. ``p_recover[j]`` is the probability that the link lands
    in state ``j`` when a blockage ends.
    """

    mcs_levels: tuple[float, ...] = DEFAULT_MCS_LEVELS
    p_recover: tuple[float, ...] = DEFAULT_P_RECOVER


@dataclass(frozen=True)
class QueueParams:
    """Transmit queue limits and the offered-load knob.

    ``a_factor`` positions the steady-state aggregated frame size at the
    best rate: 1.0 means frames reach ``a_max`` exactly.
    """

    q: float = 6_348_000.0
    a_max: float = 634_800.0
    a_factor: float = 1.0


@dataclass(frozen=True)
class SweepPolicy:
    """Periodic sector-sweep schedule; ``ssi`` may be infinite (never sweep)."""

    ssi: float = math.inf


@dataclass(frozen=True)
class ScenarioConfig:
    timing: TimingParams = TimingParams()
    blockage: BlockageProcess = BlockageProcess()
    rates: LinkRates = LinkRates()
    queue: QueueParams = QueueParams()
    sweep: SweepPolicy = SweepPolicy()


@dataclass(frozen=True)
class Scenario:
    """A validated configuration plus its derived quantities."""

    config: ScenarioConfig
    block_duration: float
    t_access: float
    overhead: float
    load: float

    @property
    def mu_slots(self) -> float:
        """Mean inter-blockage interval expressed in chain slots."""
        return self.config.blockage.mu / self.config.timing.slot


def physical_block_duration(blockage: BlockageProcess) -> float:
    """Time the beam stays physically obstructed by one crossing.

    The shadowed path length is the beam width at the crossing distance,
    2*d*tan(alpha/2), traversed at speed v. The blocker itself is
    treated as a point.
    """
    return 2.0 * blockage.d * math.tan(blockage.alpha / 2.0) / blockage.v


def channel_access_time(timing: TimingParams) -> float:
    """Mean time to win the channel before each transmission.

    Collision-free single-link CSMA/CA: DIFS, the mean backoff of
    cw_min/2 MAC slots, then SIFS and the ACK.
    """
    return (timing.t_difs
            + (timing.cw_min / 2.0) * timing.t_slot_mac
            + timing.t_sifs
            + timing.t_ack)


def overhead_factor(sweep: SweepPolicy, timing: TimingParams) -> float:
    """Air-time inflation from periodic sector sweeps.

    Each interval of length ssi loses t_sweep to the sweep, so
    transmissions stretch by ssi/(ssi - t_sweep). No sweeps means no
    inflation.

    Raises:
        ConfigError: finite ssi does not exceed t_sweep.
    """
    if math.isinf(sweep.ssi):
        return 1.0
    if sweep.ssi <= timing.t_sweep:
        raise ConfigError(
            [f"ssi: must exceed t_sweep ({timing.t_sweep}), got {sweep.ssi}"])
    return sweep.ssi / (sweep.ssi - timing.t_sweep)


def load_from_aggregation_factor(config: ScenarioConfig) -> float:
    """Offered load (bits/s) that yields the requested aggregation level.

    Chosen so the steady-state queue level at the best rate equals
    a_factor * a_max: the queue refills during one access-plus-transmit
    cycle exactly as fast as it drains.
    """
    a_bits = config.queue.a_factor * config.queue.a_max
    if a_bits == 0.0:
        return 0.0
    f = overhead_factor(config.sweep, config.timing)
    t_acc = channel_access_time(config.timing)
    best = config.rates.mcs_levels[0]
    return a_bits / (f * (t_acc + a_bits / best))


def _check_timing(t: TimingParams, bad: list[str]) -> None:
    for name in ("t_difs", "t_sifs", "t_ack", "t_slot_mac", "t_sweep", "slot"):
        v = getattr(t, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            bad.append(f"{name}: must be a positive finite duration, got {v!r}")
    if not (isinstance(t.cw_min, int) and t.cw_min >= 0):
        bad.append(f"cw_min: must be a non-negative integer, got {t.cw_min!r}")


def _check_blockage(b: BlockageProcess, slot: float, bad: list[str]) -> None:
    for name, v in (("mu", b.mu), ("sigma", b.sigma), ("d", b.d), ("v", b.v)):
        if not (math.isfinite(v) and v > 0):
            bad.append(f"{name}: must be positive, got {v!r}")
    if not (0.0 < b.alpha < math.pi):
        bad.append(f"alpha: must lie in (0, pi) radians, got {b.alpha!r}")
    if math.isfinite(b.mu) and b.mu > 0 and slot > 0 and b.mu / slot <= 1.0:
        bad.append(f"mu: must exceed one chain slot ({slot} s), got {b.mu!r}")


def _check_rates(r: LinkRates, bad: list[str]) -> None:
    m = r.mcs_levels
    if len(m) < 1:
        bad.append("mcs_levels: at least one rate required")
    elif any(not (math.isfinite(x) and x > 0) for x in m):
        bad.append(f"mcs_levels: all rates must be positive, got {m!r}")
    elif any(m[i] <= m[i + 1] for i in range(len(m) - 1)):
        bad.append(f"mcs_levels: must be strictly descending, got {m!r}")
    p = r.p_recover
    if len(p) != len(m):
        bad.append(f"p_recover: length {len(p)} does not match "
                   f"mcs_levels length {len(m)}")
    if any(not (0.0 <= x <= 1.0) for x in p):
        bad.append(f"p_recover: entries must lie in [0, 1], got {p!r}")
    elif p and abs(math.fsum(p) - 1.0) > 1e-12:
        bad.append(f"p_recover: must sum to 1 within 1e-12, got sum {math.fsum(p)!r}")


def _check_queue(q: QueueParams, bad: list[str]) -> None:
    if not (math.isfinite(q.a_max) and q.a_max > 0):
        bad.append(f"a_max: must be positive, got {q.a_max!r}")
    if not (math.isfinite(q.q) and q.q > 0):
        bad.append(f"q: must be positive, got {q.q!r}")
    if math.isfinite(q.a_max) and math.isfinite(q.q) and q.a_max > q.q:
        bad.append(f"a_max: must not exceed queue capacity q={q.q!r}, "
                   f"got {q.a_max!r}")
    if not (0.0 <= q.a_factor <= 1.0):
        bad.append(f"a_factor: must lie in [0, 1], got {q.a_factor!r}")


def validate(config: ScenarioConfig) -> Scenario:
    """Check every invariant and attach derived quantities.

    Returns:
        A :class:`Scenario` carrying the physical block duration, the
        channel access time, the sweep overhead factor and the offered
        load.

    Raises:
        ConfigError: with one message per violated invariant.
    """
    bad: list[str] = []
    _check_timing(config.timing, bad)
    _check_blockage(config.blockage, config.timing.slot, bad)
    _check_rates(config.rates, bad)
    _check_queue(config.queue, bad)
    ssi = config.sweep.ssi
    if not (ssi > 0):
        bad.append(f"ssi: must be positive, got {ssi!r}")
    elif math.isfinite(ssi) and ssi <= config.timing.t_sweep:
        bad.append(f"ssi: must exceed t_sweep ({config.timing.t_sweep}), got {ssi!r}")
    if bad:
        raise ConfigError(bad)

    t = physical_block_duration(config.blockage)
    t_acc = channel_access_time(config.timing)
    f = overhead_factor(config.sweep, config.timing)
    load = load_from_aggregation_factor(config)
    if load * f >= config.rates.mcs_levels[0]:
        raise ConfigError(
            [f"a_factor: derived load {load!r} saturates the best rate"])
    return Scenario(config=config, block_duration=t, t_access=t_acc,
                    overhead=f, load=load)


# --- flat key=value configuration files -------------------------------

_FLOAT_KEYS = {
    "mu": ("blockage", "mu"),
    "sigma": ("blockage", "sigma"),
    "alpha": ("blockage", "alpha"),
    "d": ("blockage", "d"),
    "v": ("blockage", "v"),
    "t_difs": ("timing", "t_difs"),
    "t_sifs": ("timing", "t_sifs"),
    "t_ack": ("timing", "t_ack"),
    "t_slot_mac": ("timing", "t_slot_mac"),
    "t_sweep": ("timing", "t_sweep"),
    "slot": ("timing", "slot"),
    "ssi": ("sweep", "ssi"),
    "q": ("queue", "q"),
    "a_max": ("queue", "a_max"),
    "a_factor": ("queue", "a_factor"),
}
_INT_KEYS = {"cw_min": ("timing", "cw_min")}
_LIST_KEYS = {
    "mcs_levels": ("rates", "mcs_levels"),
    "p_recover": ("rates", "p_recover"),
}


def parse_config_text(text: str) -> ScenarioConfig:
    """Parse a flat ``key = value`` configuration.

    Blank lines and ``#`` comments are ignored. Keys mirror the field
    names of the parameter dataclasses (``mu``, ``ssi``, ``mcs_levels``,
    ...); list values are comma-separated. ``ssi = inf`` disables
    periodic sweeps. Unknown and duplicate keys are errors. Missing
    keys keep their defaults.

    Raises:
        ConfigError: on any malformed line, with the line number.
    """
    updates: dict[str, dict[str, object]] = {}
    seen: set[str] = set()
    bad: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            bad.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in seen:
            bad.append(f"line {lineno}: duplicate key {key!r}")
            continue
        seen.add(key)
        try:
            if key in _FLOAT_KEYS:
                section, name = _FLOAT_KEYS[key]
                parsed: object = float(value)
            elif key in _INT_KEYS:
                section, name = _INT_KEYS[key]
                parsed = int(value)
            elif key in _LIST_KEYS:
                section, name = _LIST_KEYS[key]
                parsed = tuple(float(x) for x in value.split(","))
            else:
                bad.append(f"line {lineno}: unknown key {key!r}")
                continue
        except ValueError:
            bad.append(f"line {lineno}: cannot parse value for {key!r}: {value!r}")
            continue
        updates.setdefault(section, {})[name] = parsed
    if bad:
        raise ConfigError(bad)

    config = ScenarioConfig()
    for section, kwargs in updates.items():
        config = replace(config, **{section: replace(getattr(config, section), **kwargs)})
    return config


def load_config(source: str | Path | IO[str]) -> ScenarioConfig:
    """Read a configuration file or stream; see :func:`parse_config_text`."""
    if hasattr(source, "read"):
        return parse_config_text(source.read())
    return parse_config_text(Path(source).read_text())
