"""Bound curves in the perturbation radius R and the certified-radius search.

The naive forms use only a bound on the mean score: the worst case is a
classifier taking value b on a half-space of matching probability and a
elsewhere. The CDF forms use the whole level/probability description from
``LevelBounds``: the worst case is a step classifier descending through the
levels across parallel half-spaces. Both families are monotone in R, so the
largest radius at which a lower bound stays above a threshold is found by
bisection in O(log(r_max / tau)) curve evaluations.

An unbounded certificate (lower bound above the threshold even at r_max) is
encoded as ``math.inf`` and serialized as the string "unbounded".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .gauss import Sigma, phi_sigma, phi_sigma_inv
from .levels import LevelBounds

__all__ = [
    "UNBOUNDED",
    "BoundForm",
    "BoundCurve",
    "SearchParams",
    "Certificate",
    "naive_lower",
    "naive_upper",
    "cdf_lower",
    "cdf_upper",
    "certified_radius",
    "cohen_radius",
    "best_baseline_lower",
]

UNBOUNDED = math.inf


def _mix(p: float, shift: float, sigma: Sigma, value_range) -> float:
    """b * Phi_sigma(Phi_sigma_inv(p) + shift) + a * (rest), with saturation."""
    a, b = value_range
    q = phi_sigma(phi_sigma_inv(p, sigma) + shift, sigma)
    return b * q + a * (1.0 - q)


def naive_lower(p_lower: float, radius: float, sigma: Sigma, value_range) -> float:
    """Mean-only lower bound on the smoothed mean at distance ``radius``."""
    return _mix(p_lower, -radius, sigma, value_range)


def naive_upper(p_upper: float, radius: float, sigma: Sigma, value_range) -> float:
    """Mirror image of ``naive_lower`` with the shift +R."""
    return _mix(p_upper, radius, sigma, value_range)


def best_baseline_lower(e_hat: float, radius: float, sigma: Sigma, value_range) -> float:
    """Naive lower bound fed the empirical mean itself.

    Upper envelope over every valid mean lower bound: no baseline certificate
    can beat this one, which makes it the strongest possible comparison point.
    """
    a, b = value_range
    return naive_lower((e_hat - a) / (b - a), radius, sigma, value_range)


def _shifted_probs(p: np.ndarray, shift: float, sigma: Sigma) -> np.ndarray:
    t = np.asarray(phi_sigma_inv(np.asarray(p, dtype=float), sigma))
    return np.asarray(phi_sigma(t + shift, sigma))


def cdf_lower(bounds: LevelBounds, radius: float, sigma: Sigma) -> float:
    """Step-function lower bound on the smoothed mean at distance R."""
    a, _ = bounds.value_range
    q = _shifted_probs(bounds.p_lower, -radius, sigma)
    widths = np.diff(bounds.levels, prepend=a)
    terms = widths * q
    return a + float(np.sort(terms).sum())


def cdf_upper(bounds: LevelBounds, radius: float, sigma: Sigma) -> float:
    """Step-function upper bound on the smoothed mean at distance R."""
    _, b = bounds.value_range
    q = _shifted_probs(bounds.p_upper, radius, sigma)
    widths = np.append(np.diff(bounds.levels), b - bounds.levels[-1])
    terms = widths * q
    return float(bounds.levels[0]) + float(np.sort(terms).sum())


class BoundForm(Enum):
    NAIVE_LOWER = "naive-lower"
    NAIVE_UPPER = "naive-upper"
    CDF_LOWER = "cdf-lower"
    CDF_UPPER = "cdf-upper"

    @property
    def is_lower(self) -> bool:
        return self in (BoundForm.NAIVE_LOWER, BoundForm.CDF_LOWER)


@dataclass(frozen=True)
class BoundCurve:
    """Immutable bound-as-a-function-of-R, fed to the radius search."""

    form: BoundForm
    sigma: Sigma
    value_range: tuple[float, float]
    p: float | None = None
    bounds: LevelBounds | None = None

    @classmethod
    def naive(cls, p: float, sigma: Sigma, value_range, lower: bool = True) -> "BoundCurve":
        form = BoundForm.NAIVE_LOWER if lower else BoundForm.NAIVE_UPPER
        return cls(form, sigma, tuple(value_range), p=float(np.clip(p, 0.0, 1.0)))

    @classmethod
    def cdf(cls, bounds: LevelBounds, sigma: Sigma, lower: bool = True) -> "BoundCurve":
        form = BoundForm.CDF_LOWER if lower else BoundForm.CDF_UPPER
        return cls(form, sigma, bounds.value_range, bounds=bounds)

    def __call__(self, radius: float) -> float:
        if radius < 0:
            raise ValueError("radius must be non-negative")
        if self.form is BoundForm.NAIVE_LOWER:
            return naive_lower(self.p, radius, self.sigma, self.value_range)
        if self.form is BoundForm.NAIVE_UPPER:
            return naive_upper(self.p, radius, self.sigma, self.value_range)
        if self.form is BoundForm.CDF_LOWER:
            return cdf_lower(self.bounds, radius, self.sigma)
        return cdf_upper(self.bounds, radius, self.sigma)


@dataclass(frozen=True)
class SearchParams:
    """Radius precision tau and search ceiling r_max."""

    tau: float = 1e-4
    r_max: float = 12.5  # 50 * sigma at the default sigma = 0.25

    def __post_init__(self):
        if not 0 < self.tau < self.r_max:
            raise ValueError(f"need 0 < tau < r_max, got tau={self.tau}, r_max={self.r_max}")

    @classmethod
    def default(cls, sigma: Sigma, tau: float = 1e-4) -> "SearchParams":
        # Gaussian mass beyond 50 sigma is below representable precision, so a
        # bound that still clears the threshold there is honestly "unbounded".
        return cls(tau=tau, r_max=50.0 * sigma.value)


def certified_radius(curve: BoundCurve, threshold: float, search: SearchParams) -> float:
    """Largest R (up to tau) at which the lower-form curve stays >= threshold.

    Returns 0 when the threshold is unmet already at R=0, and ``UNBOUNDED``
    when it is still met at r_max.
    """
    if not curve.form.is_lower:
        raise ValueError("radius search needs a lower-form curve")
    a, b = curve.value_range
    if not a < threshold < b:
        raise ValueError(f"threshold must lie in ({a}, {b}), got {threshold}")
    if curve(0.0) < threshold:
        return 0.0
    if curve(search.r_max) >= threshold:
        return UNBOUNDED
    lo, hi = 0.0, search.r_max
    while hi - lo > search.tau:
        mid = 0.5 * (lo + hi)
        if curve(mid) >= threshold:
            lo = mid
        else:
            hi = mid
    return lo


def cohen_radius(p1_lower: float, sigma: Sigma) -> float:
    """Closed-form radius sigma * Phi^-1(p1) from the vote-based analysis.

    Cross-validation hook: must match ``certified_radius`` of the naive lower
    curve on (0, 1) at threshold 0.5, within tau.
    """
    if not 0.0 < p1_lower < 1.0:
        raise ValueError("p1 lower bound must lie strictly in (0, 1)")
    return phi_sigma_inv(p1_lower, sigma)


@dataclass(frozen=True)
class Certificate:
    """One certified-radius record for (input, measure, method, threshold)."""

    input_id: str
    measure: str
    predicted_class: int
    threshold: float
    radius: float  # math.inf encodes an unbounded certificate
    method: str  # naive | cdf | best-baseline
    alpha: float
    sigma: float
    n_levels: int
    bound_at_zero: float
    m: int
    tau: float
    r_max: float
    seed: int | None = None

    def to_record(self) -> dict:
        rec = {
            "input_id": self.input_id,
            "measure": self.measure,
            "predicted_class": self.predicted_class,
            "threshold": self.threshold,
            "radius": "unbounded" if math.isinf(self.radius) else round(self.radius, 12),
            "method": self.method,
            "alpha": self.alpha,
            "sigma": self.sigma,
            "n_levels": self.n_levels,
            "bound_at_zero": round(self.bound_at_zero, 12),
            "m": self.m,
            "tau": self.tau,
            "r_max": self.r_max,
        }
        if self.seed is not None:
            rec["seed"] = self.seed
        return rec
