"""Certified step-function description of the score distribution.

Levels s_1 <= ... <= s_n are chosen so each interval holds an equal share of
the sorted samples (the element at 1-based position 1 + (i-1)m/n). At each
level the exceedance probability P(score >= s_j) is bracketed by the empirical
estimate +- the DKW half-width, clipped to [0, 1]. The resulting
``LevelBounds`` is the frozen statistical event every downstream bound
evaluation reuses; it is never re-sampled during radius search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concentration import ConfidenceBudget, dkw_epsilon
from .measures import ScalarSamples

__all__ = ["LevelBounds", "select_levels", "cdf_bounds", "exact_level_bounds"]


@dataclass(frozen=True)
class LevelBounds:
    """Levels with lower/upper exceedance probabilities under one DKW event."""

    levels: np.ndarray
    p_lower: np.ndarray
    p_upper: np.ndarray
    value_range: tuple[float, float]
    epsilon: float
    budget: ConfidenceBudget | None = None

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        p_lower = np.asarray(self.p_lower, dtype=float)
        p_upper = np.asarray(self.p_upper, dtype=float)
        a, b = self.value_range
        n = levels.size
        if n == 0:
            raise ValueError("need at least one level")
        if p_lower.shape != (n,) or p_upper.shape != (n,):
            raise ValueError("probability arrays must match the level count")
        if np.any(np.diff(levels) < 0):
            raise ValueError("levels must be sorted ascending")
        if levels[0] <= a or levels[-1] >= b:
            raise ValueError(f"levels must lie strictly inside ({a}, {b})")
        if np.any(p_lower < 0) or np.any(p_upper > 1) or np.any(p_lower > p_upper):
            raise ValueError("need 0 <= p_lower <= p_upper <= 1 at every level")
        if np.any(np.diff(p_lower) > 0) or np.any(np.diff(p_upper) > 0):
            raise ValueError("exceedance bounds must be non-increasing in the level")
        if np.any(p_upper - p_lower > 2 * self.epsilon + 1e-15):
            raise ValueError("band width exceeds 2 * epsilon")
        for arr in (levels, p_lower, p_upper):
            arr.setflags(write=False)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "p_lower", p_lower)
        object.__setattr__(self, "p_upper", p_upper)

    @property
    def n(self) -> int:
        return self.levels.size


def select_levels(samples: ScalarSamples, n: int) -> np.ndarray:
    """Equal-count levels from the sorted sample values.

    Level i (1-based) is the sorted element at position 1 + floor((i-1) m / n);
    consecutive duplicates collapse, so fewer than n levels may come back.
    """
    if samples.m == 0:
        raise ValueError("empty samples")
    if not 1 <= n <= samples.m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={samples.m}")
    ordered = np.sort(samples.values)
    positions = (np.arange(n) * samples.m) // n
    levels = np.unique(ordered[positions])
    a, b = samples.value_range
    # Guard against values that sit on the boundary after float round-off.
    return np.clip(levels, np.nextafter(a, b), np.nextafter(b, a))


def cdf_bounds(
    samples: ScalarSamples,
    levels: np.ndarray,
    budget: ConfidenceBudget,
    epsilon: float | None = None,
) -> LevelBounds:
    """DKW-banded exceedance probabilities at the given levels.

    ``epsilon`` overrides the DKW half-width; pass 0 to get the exact empirical
    probabilities (oracle mode for tests that feed exact distributions).
    """
    levels = np.asarray(levels, dtype=float)
    a, b = samples.value_range
    if np.any(levels <= a) or np.any(levels >= b):
        raise ValueError(f"levels must lie strictly inside ({a}, {b})")
    eps = dkw_epsilon(budget) if epsilon is None else float(epsilon)
    ordered = np.sort(samples.values)
    p_hat = (samples.m - np.searchsorted(ordered, levels, side="left")) / samples.m
    p_lower = np.clip(p_hat - eps, 0.0, 1.0)
    p_upper = np.clip(p_hat + eps, 0.0, 1.0)
    # Clipping can only strengthen monotonicity, but ulp-level arithmetic may
    # still violate it; a cumulative-min scan only ever lowers a lower bound.
    p_lower = np.minimum.accumulate(p_lower)
    p_upper = np.minimum.accumulate(p_upper)
    return LevelBounds(levels, p_lower, p_upper, samples.value_range, eps, budget)


def exact_level_bounds(levels, probabilities, value_range) -> LevelBounds:
    """LevelBounds carrying exact exceedance probabilities (epsilon = 0)."""
    probs = np.asarray(probabilities, dtype=float)
    return LevelBounds(np.asarray(levels, dtype=float), probs.copy(), probs.copy(),
                       tuple(value_range), 0.0, None)
