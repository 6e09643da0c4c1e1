"""Long-run throughput statistics from occupancy and per-state rates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ThroughputSummary:
    """Occupancy-weighted mean and fluctuation of the link rate.

    Fluctuation is reported as the standard deviation (same units as
    the mean); the variance is carried alongside.
    """

    mean: float
    variance: float
    std_dev: float


def summarize(pi, thp) -> ThroughputSummary:
    """Weight per-state rates by long-run occupancy.

    Raises:
        ValueError: occupancy and rate vectors differ in length.
    """
    pi = np.asarray(pi, dtype=float)
    thp = np.asarray(thp, dtype=float)
    if pi.shape != thp.shape:
        raise ValueError(
            f"occupancy length {pi.shape} does not match rates {thp.shape}")
    mean = float(pi @ thp)
    variance = float(pi @ (thp - mean) ** 2)
    return ThroughputSummary(mean=mean, variance=variance,
                             std_dev=math.sqrt(variance))
