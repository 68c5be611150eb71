"""Measure extraction tests: prediction, projection, margin, invariants."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from certconf import (
    MeasureKind,
    ScoreSamples,
    Sigma,
    empirical_mean,
    extract_scalar,
    predict_class,
)

SIGMA = Sigma(0.25)


def samples(rows):
    return ScoreSamples(np.array(rows, dtype=float), SIGMA)


def test_predict_constant_argmax():
    ss = samples([[0.6, 0.3, 0.1]] * 3)
    assert predict_class(ss) == 0


def test_predict_tie_breaks_low_index():
    ss = samples([[0.4, 0.4, 0.2], [0.4, 0.4, 0.2]])
    assert predict_class(ss) == 0


def test_predict_from_means():
    ss = samples([[0.2, 0.5, 0.3], [0.2, 0.5, 0.3]])
    assert predict_class(ss) == 1


def test_predict_row_permutation_invariant():
    rng = np.random.default_rng(3)
    rows = rng.dirichlet(np.ones(4), size=20)
    ss = samples(rows)
    shuffled = samples(rows[rng.permutation(20)])
    assert predict_class(ss) == predict_class(shuffled)


def test_margin_extraction():
    ss = samples([[0.6, 0.3, 0.1]] * 2)
    assert extract_scalar(ss, MeasureKind.MARGIN, 0).values[0] == pytest.approx(0.3)
    assert extract_scalar(ss, MeasureKind.MARGIN, 1).values[0] == pytest.approx(-0.3)


def test_average_score_extraction():
    ss = samples([[0.6, 0.3, 0.1]] * 2)
    got = extract_scalar(ss, MeasureKind.AVERAGE_SCORE, 0)
    assert got.values[0] == pytest.approx(0.6)
    assert got.value_range == (0.0, 1.0)
    assert got.m == 2


def test_margin_needs_two_classes():
    ss = ScoreSamples(np.ones((3, 1)), SIGMA)
    with pytest.raises(ValueError):
        extract_scalar(ss, MeasureKind.MARGIN, 0)


def test_measure_ranges():
    rng = np.random.default_rng(11)
    ss = samples(rng.dirichlet(np.ones(5), size=50))
    for i in range(5):
        margin = extract_scalar(ss, MeasureKind.MARGIN, i).values
        assert np.all(margin > -1) and np.all(margin < 1)
        avg = extract_scalar(ss, MeasureKind.AVERAGE_SCORE, i).values
        assert np.all(avg > 0) and np.all(avg < 1)


def test_empirical_mean():
    ss = samples([[0.5, 0.5], [0.5, 0.5]])
    assert empirical_mean(extract_scalar(ss, MeasureKind.AVERAGE_SCORE, 0)) == 0.5
    ss = samples([[0.2, 0.8], [0.4, 0.6], [0.6, 0.4]])
    assert empirical_mean(
        extract_scalar(ss, MeasureKind.AVERAGE_SCORE, 0)
    ) == pytest.approx(0.4)


def test_row_sum_rejection():
    with pytest.raises(ValueError, match="sum"):
        samples([[0.9, 0.6], [0.5, 0.5]])


def test_saturated_entries_are_nudged_inside():
    ss = samples([[1.0, 0.0], [1.0, 0.0]])
    vals = extract_scalar(ss, MeasureKind.AVERAGE_SCORE, 0).values
    assert np.all(vals < 1.0) and np.all(vals > 0.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.integers(min_value=2, max_value=6))
def test_margin_dominance(seed, k):
    # mean(h_i) - mean(h_j) >= mean(margin_i) for every j != i, exactly
    rng = np.random.default_rng(seed)
    ss = samples(rng.dirichlet(np.ones(k), size=25))
    col_means = ss.scores.mean(axis=0)
    for i in range(k):
        margin_mean = extract_scalar(ss, MeasureKind.MARGIN, i).values.mean()
        for j in range(k):
            if j != i:
                assert col_means[i] - col_means[j] >= margin_mean - 1e-12
