"""Certified confidence bounds for Gaussian-smoothed classifiers."""

from .certify import (
    UNBOUNDED,
    BoundCurve,
    Certificate,
    SearchParams,
    best_baseline_lower,
    cdf_lower,
    cdf_upper,
    certified_radius,
    cohen_radius,
    naive_lower,
    naive_upper,
)
from .concentration import ConfidenceBudget, dkw_epsilon, hoeffding_lower_mean
from .gauss import Sigma, phi_sigma, phi_sigma_inv
from .levels import LevelBounds, cdf_bounds, exact_level_bounds, select_levels
from .measures import (
    MeasureKind,
    ScalarSamples,
    ScoreSamples,
    empirical_mean,
    extract_scalar,
    predict_class,
)
from .oracle import (
    Flat,
    LogisticHalfSpace,
    NoiseSampler,
    WorstCaseStep,
    mc_smoothed_mean,
    sample_scores,
    smoothed_mean_quadrature,
    worst_case_step_from_bounds,
)

__version__ = "0.1.0"
