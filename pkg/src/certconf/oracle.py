"""Ground-truth machinery for validating the certificate formulas.

Synthetic base classifiers with analytically known smoothed behavior: a flat
classifier, a logistic half-space, and the worst-case step classifier whose
score descends through the levels across parallel half-spaces orthogonal to a
direction u. All three depend on the input only through the projection u.z,
so their smoothed means reduce to one-dimensional Gaussian integrals that can
be evaluated by adaptive quadrature or, for steps, in closed form.

Sampling uses numpy's Philox generator, a counter-based stream that is
bit-reproducible across platforms for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .gauss import Sigma, phi_sigma, phi_sigma_inv
from .levels import LevelBounds
from .measures import ScalarSamples

__all__ = [
    "Flat",
    "LogisticHalfSpace",
    "WorstCaseStep",
    "NoiseSampler",
    "sample_scores",
    "smoothed_mean_quadrature",
    "mc_smoothed_mean",
    "worst_case_step_from_bounds",
]

_OPEN_NUDGE = 1e-12


def _unit(direction) -> np.ndarray:
    u = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(u)
    if not norm > 0:
        raise ValueError("direction must be a nonzero vector")
    u = u / norm
    u.setflags(write=False)
    return u


@dataclass(frozen=True)
class Flat:
    """Constant score everywhere; its smoothed mean never moves."""

    value: float
    dimension: int = 16
    value_range: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        a, b = self.value_range
        if not a < self.value < b:
            raise ValueError(f"flat value must lie in ({a}, {b})")

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dimension:
            raise ValueError(f"expected dimension {self.dimension}, got {points.shape[1]}")
        return np.full(points.shape[0], self.value)

    def score_profile(self, w):
        return np.full_like(np.asarray(w, dtype=float), self.value)

    def profile_center(self, center) -> float:
        return 0.0

    def profile_breakpoints(self) -> np.ndarray:
        return np.array([])

    def exceedance(self, s: float, center, sigma: Sigma) -> float:
        return 1.0 if self.value >= s else 0.0


@dataclass(frozen=True)
class LogisticHalfSpace:
    """Score a + (b-a) * logistic((u.z - offset) / temperature)."""

    direction: np.ndarray
    offset: float = 0.0
    temperature: float = 1.0
    value_range: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        object.__setattr__(self, "direction", _unit(self.direction))

    @property
    def dimension(self) -> int:
        return self.direction.size

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dimension:
            raise ValueError(f"expected dimension {self.dimension}, got {points.shape[1]}")
        return self.score_profile(points @ self.direction)

    def score_profile(self, w):
        a, b = self.value_range
        z = (np.asarray(w, dtype=float) - self.offset) / self.temperature
        # The logistic is oriented so the score *decreases* along u, matching
        # the worst-case picture of a certificate eroding under perturbation.
        return a + (b - a) / (1.0 + np.exp(z))

    def profile_center(self, center) -> float:
        return float(np.asarray(center, dtype=float) @ self.direction)

    def profile_breakpoints(self) -> np.ndarray:
        return np.array([self.offset])

    def exceedance(self, s: float, center, sigma: Sigma) -> float:
        """P(score >= s) under N(center, sigma^2 I), analytically."""
        a, b = self.value_range
        if s <= a:
            return 1.0
        if s >= b:
            return 0.0
        # score >= s  <=>  w <= offset + T * ln((b - s)/(s - a))
        w_cut = self.offset + self.temperature * math.log((b - s) / (s - a))
        return phi_sigma(w_cut - self.profile_center(center), sigma)


@dataclass(frozen=True)
class WorstCaseStep:
    """Step classifier descending b, s_n, ..., s_1, a along the direction u.

    ``thresholds`` holds the n+1 ascending slab boundaries (along u.z); the
    first may be -inf, which empties the b slab and yields the extremal
    classifier that attains the CDF lower bound exactly.
    """

    levels: np.ndarray
    thresholds: np.ndarray
    direction: np.ndarray
    value_range: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        thresholds = np.asarray(self.thresholds, dtype=float)
        a, b = self.value_range
        if levels.size == 0:
            raise ValueError("need at least one level")
        if np.any(np.diff(levels) < 0) or levels[0] <= a or levels[-1] >= b:
            raise ValueError(f"levels must be sorted strictly inside ({a}, {b})")
        if thresholds.shape != (levels.size + 1,):
            raise ValueError("need one threshold per slab boundary (n + 1 of them)")
        if np.any(np.diff(thresholds) < 0):
            raise ValueError("thresholds must be sorted ascending")
        for arr in (levels, thresholds):
            arr.setflags(write=False)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "thresholds", thresholds)
        object.__setattr__(self, "direction", _unit(self.direction))

    @property
    def dimension(self) -> int:
        return self.direction.size

    @property
    def slab_values(self) -> np.ndarray:
        a, b = self.value_range
        return np.concatenate([[b], self.levels[::-1], [a]])

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.dimension:
            raise ValueError(f"expected dimension {self.dimension}, got {points.shape[1]}")
        return self.score_profile(points @ self.direction)

    def score_profile(self, w):
        idx = np.searchsorted(self.thresholds, np.asarray(w, dtype=float), side="right")
        return self.slab_values[idx]

    def profile_center(self, center) -> float:
        return float(np.asarray(center, dtype=float) @ self.direction)

    def profile_breakpoints(self) -> np.ndarray:
        return self.thresholds[np.isfinite(self.thresholds)]

    def exceedance(self, s: float, center, sigma: Sigma) -> float:
        a, b = self.value_range
        if s <= a:
            return 1.0
        if s > b:
            return 0.0
        values = self.slab_values
        keep = np.flatnonzero(values >= s)
        last = keep[-1]  # slabs are descending, so they form a prefix
        if last == values.size - 1:
            return 1.0
        cut = self.thresholds[last]
        if not np.isfinite(cut):
            return 0.0 if cut < 0 else 1.0
        return phi_sigma(cut - self.profile_center(center), sigma)

    def smoothed_mean_exact(self, center, sigma: Sigma) -> float:
        """Closed-form smoothed mean: sum of slab value times slab mass."""
        w0 = self.profile_center(center)
        cdf = np.asarray(phi_sigma(self.thresholds - w0, sigma))
        masses = np.diff(np.concatenate([[0.0], cdf, [1.0]]))
        return float(np.sort(self.slab_values * masses).sum())


def worst_case_step_from_bounds(
    bounds: LevelBounds, sigma: Sigma, direction, center=None
) -> WorstCaseStep:
    """Extremal step classifier realizing the lower-bound probabilities.

    P(score >= s_j) under N(center, sigma^2 I) equals ``bounds.p_lower[j]``
    exactly; the b slab is empty, which is what makes the CDF lower bound an
    equality for this classifier.
    """
    direction = _unit(direction)
    w0 = 0.0 if center is None else float(np.asarray(center, dtype=float) @ direction)
    cuts = w0 + np.asarray(phi_sigma_inv(bounds.p_lower, sigma))
    thresholds = np.concatenate([[-np.inf], cuts[::-1]])
    # Equal probabilities produce zero-width slabs; nudge ordering violations
    # caused by ties only.
    thresholds = np.maximum.accumulate(thresholds)
    return WorstCaseStep(bounds.levels, thresholds, direction, bounds.value_range)


class NoiseSampler:
    """Reproducible isotropic Gaussian noise stream (Philox, seeded)."""

    def __init__(self, sigma: Sigma, dimension: int, seed: int):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.sigma = sigma
        self.dimension = dimension
        self.seed = seed
        self._rng = np.random.Generator(np.random.Philox(seed))

    def draw(self, m: int) -> np.ndarray:
        return self._rng.standard_normal((m, self.dimension)) * self.sigma.value


def sample_scores(classifier, center, sampler: NoiseSampler, m: int) -> ScalarSamples:
    """m classifier scores at center + noise, wrapped for the pipeline."""
    if m < 2:
        raise ValueError("need at least 2 samples")
    center = np.asarray(center, dtype=float)
    if center.shape != (sampler.dimension,):
        raise ValueError("center dimension does not match the sampler")
    values = classifier.evaluate(center + sampler.draw(m))
    a, b = classifier.value_range
    values = np.clip(values, a + _OPEN_NUDGE, b - _OPEN_NUDGE)
    return ScalarSamples(values, classifier.value_range)


def smoothed_mean_quadrature(classifier, center, sigma: Sigma) -> float:
    """Smoothed mean of a 1-D-structure classifier by adaptive quadrature.

    Integrates the score profile against the Gaussian density over +-12 sigma
    around the projected center, splitting panels at known discontinuities,
    and adds the analytic tail masses. Absolute error <= 1e-9.
    """
    if not hasattr(classifier, "score_profile"):
        raise ValueError("classifier has no one-dimensional structure")
    w0 = classifier.profile_center(center)
    s = sigma.value
    lo, hi = w0 - 12.0 * s, w0 + 12.0 * s
    pts = [float(t) for t in classifier.profile_breakpoints() if lo < t < hi]

    def integrand(w):
        z = (w - w0) / s
        return float(classifier.score_profile(w)) * math.exp(-0.5 * z * z) / (s * math.sqrt(2 * math.pi))

    body, _ = quad(integrand, lo, hi, points=pts or None, limit=200, epsabs=1e-12, epsrel=1e-12)
    tail_lo = float(classifier.score_profile(lo)) * phi_sigma(lo - w0, sigma)
    tail_hi = float(classifier.score_profile(hi)) * (1.0 - phi_sigma(hi - w0, sigma))
    return body + tail_lo + tail_hi


def mc_smoothed_mean(classifier, center, sampler: NoiseSampler, m: int):
    """Monte-Carlo smoothed mean and its standard error."""
    if m < 100:
        raise ValueError("need at least 100 samples for a meaningful standard error")
    center = np.asarray(center, dtype=float)
    values = classifier.evaluate(center + sampler.draw(m))
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(m))
