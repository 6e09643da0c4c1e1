"""Dwell-time and sweep-preemption probabilities.

The chain spends a geometrically distributed number of slots in each
state; :func:`stay_probability` and :func:`dwell_pmf` convert between
mean dwell times and per-slot stay probabilities. A suboptimal sector
state can only be rescued by the next periodic sweep if no new blockage
arrives first; :func:`sweep_preemption_probability` gives the closed
form of that race and :func:`sweep_preemption_mc` estimates it by
seeded sampling as an independent check.
"""

from __future__ import annotations

import math

import numpy as np

_SQRT2 = math.sqrt(2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


def erf(x: float) -> float:
    """Error function with exact odd symmetry.

    Delegates to the C library through :func:`math.erf`, which is
    accurate to well under 1e-10 absolute; the sign is applied to the
    magnitude so erf(-x) == -erf(x) holds bit-exactly.
    """
    return math.copysign(math.erf(abs(x)), x)


def stay_probability(mean_dwell_slots: float) -> float:
    """Per-slot probability of remaining in a state, from its mean dwell.

    A geometric dwell with stay probability p lasts 1/(1-p) slots on
    average; this is the inverse map. A mean of exactly one slot is the
    boundary case where the state is left every slot.

    Raises:
        ValueError: mean dwell shorter than one slot.
    """
    if mean_dwell_slots < 1.0:
        raise ValueError(
            f"mean dwell must be at least one slot, got {mean_dwell_slots!r}")
    return 1.0 - 1.0 / mean_dwell_slots


def dwell_pmf(p_stay: float, k: int) -> float:
    """Probability of staying exactly k slots (geometric, k >= 1)."""
    if k < 1 or int(k) != k:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return p_stay ** (k - 1) * (1.0 - p_stay)


def sweep_preemption_probability(mu: float, sigma: float, s: float) -> float:
    """Probability that a new blockage lands before the next sweep.

    Blockage inter-arrival gaps are N(mu, sigma^2); sweeps fire every
    ``s`` seconds, so the elapsed time into the sweep period at the
    moment a blockage occurs is uniform on [0, s). Marginalizing the
    Gaussian tail race over that uniform phase gives the closed form
    evaluated here. The result is clamped to [0, 1] against sub-1e-12
    floating-point excursions. An infinite ``s`` means sweeps never
    fire, so a blockage always comes first.

    Raises:
        ValueError: non-positive mu, sigma or s.
    """
    if not (mu > 0.0 and sigma > 0.0 and s > 0.0):
        raise ValueError(
            f"mu, sigma and s must be positive, got ({mu!r}, {sigma!r}, {s!r})")
    if math.isinf(s):
        return 1.0
    r = _SQRT2 * sigma
    tail = ((s - mu) / (2.0 * s)) * (erf(mu / r) - erf((mu - s) / r))
    peak = _SQRT_2_OVER_PI * (sigma / (2.0 * s)) * (
        math.exp(-mu * mu / (2.0 * sigma * sigma))
        - math.exp(-((mu - s) * (mu - s)) / (2.0 * sigma * sigma)))
    return min(1.0, max(0.0, tail - peak))


def sweep_preemption_mc(mu: float, sigma: float, s: float,
                        n_samples: int = 100_000,
                        seed: int = 0) -> tuple[float, float]:
    """Monte Carlo estimate of :func:`sweep_preemption_probability`.

    Draws the sweep-phase offset uniform on [0, s) and the next
    blockage gap from N(mu, sigma^2) truncated at zero (negative draws
    are redrawn, not folded), then counts how often the gap beats the
    remaining time to the sweep.

    Returns:
        (estimate, binomial standard error); (1.0, 0.0) for infinite s
        without consuming any randomness.

    Raises:
        ValueError: invalid distribution parameters or n_samples < 1000.
    """
    if not (mu > 0.0 and sigma > 0.0 and s > 0.0):
        raise ValueError(
            f"mu, sigma and s must be positive, got ({mu!r}, {sigma!r}, {s!r})")
    if n_samples < 1000:
        raise ValueError(f"n_samples must be at least 1000, got {n_samples!r}")
    if math.isinf(s):
        return 1.0, 0.0
    rng = np.random.default_rng(seed)
    elapsed = rng.uniform(0.0, s, n_samples)
    gaps = rng.normal(mu, sigma, n_samples)
    bad = gaps <= 0.0
    while bad.any():
        gaps[bad] = rng.normal(mu, sigma, int(bad.sum()))
        bad = gaps <= 0.0
    estimate = float(np.count_nonzero(gaps < s - elapsed)) / n_samples
    std_error = math.sqrt(estimate * (1.0 - estimate) / n_samples)
    return estimate, std_error
