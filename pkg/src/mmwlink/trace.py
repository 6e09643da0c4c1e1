"""Fit the state model to a measured throughput time series.

A measured trace shows plateaus (sector states) separated by dips
(blockages). Dips are removed with a relative threshold, the plateau
levels are found by deterministic 1-D k-means with an elbow rule on the
within-cluster variance, and the recovery weights are estimated from
which level each post-dip stretch settles on first. The fitted model
plugs back into :func:`mmwlink.chain.chain_from_rates` with a
preemption probability of 1 when the trace shows no periodic sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np

DEFAULT_BLOCKAGE_THRESHOLD = 0.3
_ELBOW_RATIO = 0.5
_STABLE_RUN = 3


class TraceFormatError(ValueError):
    """Malformed trace input; the message names the offending line."""


@dataclass(frozen=True)
class ThroughputTrace:
    """Uniformly sampled throughput measurements."""

    times: np.ndarray
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class EmpiricalModel:
    """Fitted rate ladder and recovery weights."""

    levels: tuple[float, ...]
    p_recover: tuple[float, ...]
    n_states: int


def load_trace(source: str | Path | IO[str]) -> ThroughputTrace:
    """Parse a ``time_s,throughput_bps`` CSV into a trace.

    Raises:
        TraceFormatError: missing or wrong header, unparsable row,
            negative throughput, non-increasing time, or no samples;
            messages carry the 1-based line number.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    lines = text.splitlines()
    if not lines or lines[0].strip() != "time_s,throughput_bps":
        raise TraceFormatError(
            "line 1: expected header 'time_s,throughput_bps'")
    times: list[float] = []
    values: list[float] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise TraceFormatError(
                f"line {lineno}: expected 'time,throughput', got {raw!r}")
        try:
            t = float(parts[0])
            v = float(parts[1])
        except ValueError:
            raise TraceFormatError(
                f"line {lineno}: cannot parse numbers in {raw!r}") from None
        if v < 0.0:
            raise TraceFormatError(
                f"line {lineno}: negative throughput {v!r}")
        if times and t <= times[-1]:
            raise TraceFormatError(
                f"line {lineno}: time {t!r} does not increase past {times[-1]!r}")
        times.append(t)
        values.append(v)
    if not times:
        raise TraceFormatError("line 2: trace contains no samples")
    return ThroughputTrace(times=np.asarray(times), values=np.asarray(values))


def _kmeans_1d(sorted_data: np.ndarray, k: int) -> tuple[np.ndarray, float]:
    """Deterministic Lloyd iteration on sorted 1-D data.

    Centers start at evenly spaced quantiles. Returns the ascending
    centers (possibly fewer than k if clusters empty out) and the
    within-cluster sum of squared distances.
    """
    quantiles = (2.0 * np.arange(k) + 1.0) / (2.0 * k)
    centers = np.quantile(sorted_data, quantiles)
    centers = np.unique(centers)
    for _ in range(100):
        edges = (centers[:-1] + centers[1:]) / 2.0
        split = np.searchsorted(sorted_data, edges)
        bounds = np.concatenate(([0], split, [len(sorted_data)]))
        new_centers = []
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            if hi > lo:
                new_centers.append(float(sorted_data[lo:hi].mean()))
        new_centers = np.unique(new_centers)
        if len(new_centers) == len(centers) and np.allclose(
                new_centers, centers, rtol=0.0, atol=0.0):
            break
        centers = new_centers
    edges = (centers[:-1] + centers[1:]) / 2.0
    assignment = np.searchsorted(edges, sorted_data, side="right")
    wcss = float(((sorted_data - centers[assignment]) ** 2).sum())
    return centers, wcss


def extract_levels(trace: ThroughputTrace, max_levels: int = 6,
                   blockage_threshold: float = DEFAULT_BLOCKAGE_THRESHOLD,
                   ) -> EmpiricalModel:
    """Estimate the rate ladder and recovery weights from a trace.

    Samples below ``blockage_threshold`` of the trace maximum are
    treated as blockage dips and excluded from clustering. The number
    of levels is the last k whose within-cluster variance drops by at
    least half relative to k-1. Each stretch between dips votes for
    the first level it holds for three consecutive samples; traces
    without usable dips fall back to per-level occupancy fractions.

    Raises:
        ValueError: trace shorter than 10 * max_levels, or max_levels < 1.
    """
    if max_levels < 1:
        raise ValueError(f"max_levels must be at least 1, got {max_levels!r}")
    if len(trace) < 10 * max_levels:
        raise ValueError(
            f"trace too short: need at least {10 * max_levels} samples "
            f"for max_levels={max_levels}, got {len(trace)}")
    values = trace.values
    threshold = blockage_threshold * float(values.max())
    kept_mask = values >= threshold
    kept = np.sort(values[kept_mask])
    n_distinct = len(np.unique(kept))

    centers, wcss = _kmeans_1d(kept, 1)
    best_centers = centers
    for k in range(2, min(max_levels, n_distinct) + 1):
        if wcss == 0.0:
            break
        cand_centers, cand_wcss = _kmeans_1d(kept, k)
        if 1.0 - cand_wcss / wcss < _ELBOW_RATIO:
            break
        best_centers, wcss = cand_centers, cand_wcss

    levels = np.sort(best_centers)[::-1]  # descending
    n_states = len(levels)

    # Per-sample level index over the full trace; dips get -1.
    edges_desc = (levels[:-1] + levels[1:]) / 2.0
    assign = np.full(len(values), -1, dtype=np.int64)
    kept_idx = np.nonzero(kept_mask)[0]
    # Distance to the nearest level via the midpoint edges (descending
    # order, so count how many edges the value falls below).
    assign[kept_idx] = np.searchsorted(-edges_desc, -values[kept_idx],
                                       side="right")

    votes = np.zeros(n_states, dtype=np.int64)
    in_dip = not kept_mask[0]
    stretches: list[tuple[int, int]] = []
    start = None
    for i, ok in enumerate(kept_mask):
        if ok and start is None and in_dip:
            start = i
        elif not ok:
            if start is not None:
                stretches.append((start, i))
                start = None
            in_dip = True
    if start is not None:
        stretches.append((start, len(values)))
    for lo, hi in stretches:
        seg = assign[lo:hi]
        vote = _first_stable_level(seg)
        if vote is not None:
            votes[vote] += 1

    if votes.sum() > 0:
        p = votes / votes.sum()
    else:
        counts = np.bincount(assign[kept_idx], minlength=n_states)
        p = counts / counts.sum()
    return EmpiricalModel(levels=tuple(float(x) for x in levels),
                          p_recover=tuple(float(x) for x in p),
                          n_states=n_states)


def _first_stable_level(seg: np.ndarray) -> int | None:
    """First level held for at least three consecutive samples, if any."""
    run_level = -1
    run_len = 0
    for x in seg:
        if x == run_level:
            run_len += 1
        else:
            run_level = int(x)
            run_len = 1
        if run_len >= _STABLE_RUN:
            return run_level
    return None


def to_config_fragment(model: EmpiricalModel) -> str:
    """Emit the fitted model as configuration lines."""
    levels = ",".join(repr(x) for x in model.levels)
    p = ",".join(repr(x) for x in model.p_recover)
    return f"mcs_levels = {levels}\np_recover = {p}\n"
