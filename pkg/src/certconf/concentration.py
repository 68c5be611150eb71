"""Finite-sample confidence corrections.

Two inequalities back the certificates: the Dvoretzky-Kiefer-Wolfowitz band,
which bounds the true CDF uniformly within +-epsilon of the empirical CDF, and
Hoeffding's inequality, which lower-bounds the mean of bounded samples. Each
issued certificate consumes a single 1-alpha event: the DKW band covers all
levels simultaneously, and the baseline uses one Hoeffding event.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ConfidenceBudget", "dkw_epsilon", "hoeffding_lower_mean"]


@dataclass(frozen=True)
class ConfidenceBudget:
    """Failure probability alpha for the whole certificate and sample count m."""

    alpha: float
    m: int

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.m < 2:
            raise ValueError(f"need at least 2 samples, got m={self.m}")


def dkw_epsilon(budget: ConfidenceBudget) -> float:
    """Half-width sqrt(ln(2/alpha) / 2m) of the uniform DKW confidence band."""
    return math.sqrt(math.log(2.0 / budget.alpha) / (2.0 * budget.m))


def hoeffding_lower_mean(samples, budget: ConfidenceBudget, value_range) -> float:
    """1-alpha lower confidence bound on the mean of samples bounded in (a, b).

    Returns ``mean - (b - a) * sqrt(ln(1/alpha) / 2m)``; the result may fall
    below ``a``, callers clamp when converting to a probability.
    """
    values = np.asarray(samples, dtype=float)
    if values.size == 0:
        raise ValueError("cannot bound the mean of an empty sample list")
    if values.size != budget.m:
        raise ValueError(f"sample count {values.size} does not match budget m={budget.m}")
    a, b = value_range
    if np.any(values < a) or np.any(values > b):
        raise ValueError(f"samples fall outside the stated range ({a}, {b})")
    margin = (b - a) * math.sqrt(math.log(1.0 / budget.alpha) / (2.0 * budget.m))
    return float(values.mean() - margin)
