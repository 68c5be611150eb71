"""Confidence measures over per-noise-sample softmax scores.

Raw evidence is an m x k matrix of class scores, one row per Gaussian noise
draw. Two scalar measures are supported: the average prediction score of a
class (range (0, 1)) and the margin by which a class leads the best of the
rest (range (-1, 1)). The per-sample margin identity
``h_i - h_j >= m_i`` for every j != i carries over to sample means, so a
positive mean margin certifies the predicted class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "MeasureKind",
    "ScoreSamples",
    "ScalarSamples",
    "predict_class",
    "extract_scalar",
    "empirical_mean",
]

ROW_SUM_TOL = 1e-6
# Scores numerically saturated at 0/1 are nudged into the open interval: the
# bound formulas require scores strictly inside (a, b).
BOUNDARY_NUDGE = 1e-12


class MeasureKind(Enum):
    AVERAGE_SCORE = "average-score"
    MARGIN = "margin"

    @property
    def value_range(self) -> tuple[float, float]:
        if self is MeasureKind.AVERAGE_SCORE:
            return (0.0, 1.0)
        return (-1.0, 1.0)


@dataclass(frozen=True)
class ScoreSamples:
    """Validated m x k softmax score matrix plus the smoothing scale."""

    scores: np.ndarray
    sigma: "Sigma"  # noqa: F821 - certconf.gauss.Sigma, kept untyped to avoid a cycle

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        if scores.ndim != 2:
            raise ValueError("scores must be an m x k matrix")
        m, k = scores.shape
        if m < 2:
            raise ValueError(f"need at least 2 noise samples, got {m}")
        if k < 1:
            raise ValueError("need at least one class")
        if np.any(scores < -ROW_SUM_TOL) or np.any(scores > 1.0 + ROW_SUM_TOL):
            raise ValueError("score entries must lie in [0, 1]")
        bad = np.abs(scores.sum(axis=1) - 1.0) > ROW_SUM_TOL
        if np.any(bad):
            rows = np.flatnonzero(bad)[:5].tolist()
            raise ValueError(f"rows {rows} do not sum to 1 within {ROW_SUM_TOL}")
        scores = np.clip(scores, BOUNDARY_NUDGE, 1.0 - BOUNDARY_NUDGE)
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)

    @property
    def m(self) -> int:
        return self.scores.shape[0]

    @property
    def k(self) -> int:
        return self.scores.shape[1]


@dataclass(frozen=True)
class ScalarSamples:
    """m scalar confidence values for one class under one measure."""

    values: np.ndarray
    value_range: tuple[float, float]
    measure: MeasureKind | None = None
    class_index: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        a, b = self.value_range
        if not a < b:
            raise ValueError(f"invalid range ({a}, {b})")
        if values.size and (values.min() <= a or values.max() >= b):
            raise ValueError(f"values must lie strictly inside ({a}, {b})")
        if self.measure is not None and self.measure.value_range != (a, b):
            raise ValueError(f"range ({a}, {b}) does not match measure {self.measure}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        return self.values.size


def predict_class(samples: ScoreSamples) -> int:
    """Argmax of the per-class mean scores; ties break to the lowest index."""
    return int(np.argmax(samples.scores.mean(axis=0)))


def extract_scalar(samples: ScoreSamples, measure: MeasureKind, class_index: int) -> ScalarSamples:
    """Per-row scalar measure values for one class, row order preserved."""
    if not 0 <= class_index < samples.k:
        raise ValueError(f"class index {class_index} out of range for k={samples.k}")
    if measure is MeasureKind.AVERAGE_SCORE:
        values = samples.scores[:, class_index].copy()
    else:
        if samples.k < 2:
            raise ValueError("margin needs at least two classes")
        others = np.delete(samples.scores, class_index, axis=1)
        values = samples.scores[:, class_index] - others.max(axis=1)
    return ScalarSamples(values, measure.value_range, measure, class_index)


def empirical_mean(samples: ScalarSamples) -> float:
    if samples.m == 0:
        raise ValueError("empty sample list")
    return float(samples.values.mean())
