"""Batch front door: ingest score samples, certify, and tabulate curves.

Two input modes: a CSV (or .npz) file of per-noise-sample softmax scores, or
a JSON spec describing synthetic classifiers that are sampled on the fly.
Each (input, measure, method, threshold) combination yields one JSON-lines
certificate record; the ``curve`` command aggregates certificates into a
certified-fraction-vs-radius table (CSV) and renders it to a figure.

File formats are documented in the README with bit-exact examples. An
unbounded radius is serialized as the string "unbounded". Each issued
certificate is an independent 1-alpha event; alpha is not split across the
measures or thresholds requested in one run.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

from .certify import BoundCurve, Certificate, SearchParams, certified_radius
from .concentration import ConfidenceBudget, hoeffding_lower_mean
from .gauss import Sigma
from .levels import cdf_bounds, select_levels
from .measures import (
    MeasureKind,
    ScoreSamples,
    empirical_mean,
    extract_scalar,
    predict_class,
)
from .oracle import Flat, LogisticHalfSpace, NoiseSampler, WorstCaseStep, sample_scores

__all__ = ["RunConfig", "ingest_samples", "certify_batch", "curve_table", "main"]

METHODS = ("naive", "cdf", "best-baseline")
DEFAULT_ALPHA = 0.001
DEFAULT_M = 100_000
DEFAULT_LEVELS = 100
DEFAULT_TAU = 1e-4


class IngestError(ValueError):
    """Malformed sample file or synthetic spec."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a certification batch needs, with conventional defaults."""

    sigma: float
    input_path: str | None = None
    synthetic_path: str | None = None
    alpha: float = DEFAULT_ALPHA
    m: int = DEFAULT_M  # synthetic mode only; file mode takes m from the file
    n_levels: int = DEFAULT_LEVELS
    measures: tuple[MeasureKind, ...] = (MeasureKind.AVERAGE_SCORE,)
    thresholds: tuple[float, ...] = (0.5,)
    methods: tuple[str, ...] = ("cdf", "naive")
    tau: float = DEFAULT_TAU
    r_max: float | None = None  # None -> 50 * sigma
    seed: int = 0

    def __post_init__(self):
        if (self.input_path is None) == (self.synthetic_path is None):
            raise ValueError("exactly one of input_path / synthetic_path is required")
        if not self.methods:
            raise ValueError("at least one method is required")
        for method in self.methods:
            if method not in METHODS:
                raise ValueError(f"unknown method {method!r}")
        for measure in self.measures:
            a, b = measure.value_range
            for c in self.thresholds:
                if not a < c < b:
                    raise ValueError(
                        f"threshold {c} outside the {measure.value} range ({a}, {b})"
                    )

    @property
    def search(self) -> SearchParams:
        r_max = 50.0 * self.sigma if self.r_max is None else self.r_max
        return SearchParams(tau=self.tau, r_max=r_max)


def ingest_samples(path, sigma: Sigma) -> list[tuple[str, ScoreSamples]]:
    """Parse a sample file into (input_id, ScoreSamples) pairs.

    CSV layout: header ``input_id,sample_id,score_class_0,...``, rows grouped
    by input_id. The .npz variant maps each input_id key to an m x k array.
    """
    path = Path(path)
    if not path.exists():
        raise IngestError(f"sample file not found: {path}")
    if path.suffix == ".npz":
        archive = np.load(path)
        if not archive.files:
            raise IngestError(f"{path}: no inputs")
        return [(name, ScoreSamples(archive[name], sigma)) for name in sorted(archive.files)]

    groups: dict[str, list[list[float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise IngestError(f"{path}: no inputs")
        if header[:2] != ["input_id", "sample_id"] or len(header) < 3:
            raise IngestError(f"{path}: unexpected header {header!r}")
        k = len(header) - 2
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != k + 2:
                raise IngestError(f"{path}:{lineno}: expected {k + 2} columns, got {len(row)}")
            try:
                scores = [float(v) for v in row[2:]]
            except ValueError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from None
            if abs(sum(scores) - 1.0) > 1e-6:
                raise IngestError(f"{path}:{lineno}: scores sum to {sum(scores)!r}, not 1")
            groups.setdefault(row[0], []).append(scores)
    if not groups:
        raise IngestError(f"{path}: no inputs")
    return [(name, ScoreSamples(np.array(rows), sigma)) for name, rows in sorted(groups.items())]


def _build_classifier(spec: dict, dimension: int):
    kind = spec.get("kind")
    if kind == "flat":
        return Flat(spec["value"], dimension=dimension)
    if kind == "logistic":
        direction = spec.get("direction")
        if direction is None:
            direction = np.eye(dimension)[0]
        return LogisticHalfSpace(direction, spec.get("offset", 0.0),
                                 spec.get("temperature", 1.0))
    if kind == "step":
        return WorstCaseStep(spec["levels"], spec["thresholds"], spec["direction"])
    raise IngestError(f"unknown synthetic classifier kind {kind!r}")


def ingest_synthetic(path, config: RunConfig) -> list[tuple[str, ScoreSamples]]:
    """Sample score matrices for the classifiers described in a JSON spec.

    Each classifier yields a two-class matrix (score, 1 - score). Sampling is
    deterministic: input j uses a Philox stream keyed by (config.seed, j).
    """
    with open(path) as fh:
        spec = json.load(fh)
    sigma = Sigma(spec.get("sigma", config.sigma))
    dimension = int(spec.get("dimension", 16))
    inputs = spec.get("inputs", [])
    if not inputs:
        raise IngestError(f"{path}: no inputs")
    out = []
    for idx, entry in enumerate(inputs):
        classifier = _build_classifier(entry["classifier"], dimension)
        center = np.asarray(entry.get("center", np.zeros(classifier.dimension)), dtype=float)
        child_seed = int(np.random.SeedSequence([config.seed, idx]).generate_state(1)[0])
        sampler = NoiseSampler(sigma, classifier.dimension, child_seed)
        scalar = sample_scores(classifier, center, sampler, config.m)
        matrix = np.column_stack([scalar.values, 1.0 - scalar.values])
        out.append((str(entry.get("id", f"input-{idx}")), ScoreSamples(matrix, sigma)))
    return sorted(out, key=lambda pair: pair[0])


def _curves_for(scalar, method: str, config: RunConfig, sigma: Sigma):
    """Lower-bound curve and the effective level count for one method."""
    budget = ConfidenceBudget(config.alpha, scalar.m)
    a, b = scalar.value_range
    if method == "cdf":
        levels = select_levels(scalar, min(config.n_levels, scalar.m))
        bounds = cdf_bounds(scalar, levels, budget)
        return BoundCurve.cdf(bounds, sigma), bounds.n
    if method == "naive":
        e_lo = hoeffding_lower_mean(scalar.values, budget, scalar.value_range)
        return BoundCurve.naive((e_lo - a) / (b - a), sigma, scalar.value_range), 0
    e_hat = empirical_mean(scalar)
    return BoundCurve.naive((e_hat - a) / (b - a), sigma, scalar.value_range), 0


def certify_batch(config: RunConfig):
    """Certify every input; returns (certificates, per-input error strings)."""
    sigma = Sigma(config.sigma)
    if config.input_path is not None:
        inputs = ingest_samples(config.input_path, sigma)
    else:
        inputs = ingest_synthetic(config.synthetic_path, config)
    search = config.search
    certificates: list[Certificate] = []
    errors: list[str] = []
    for input_id, samples in inputs:
        try:
            top = predict_class(samples)
            for measure in config.measures:
                scalar = extract_scalar(samples, measure, top)
                for method in config.methods:
                    curve, n_levels = _curves_for(scalar, method, config, sigma)
                    at_zero = curve(0.0)
                    for threshold in config.thresholds:
                        radius = certified_radius(curve, threshold, search)
                        certificates.append(Certificate(
                            input_id=input_id,
                            measure=measure.value,
                            predicted_class=top,
                            threshold=threshold,
                            radius=radius,
                            method=method,
                            alpha=config.alpha,
                            sigma=config.sigma,
                            n_levels=n_levels,
                            bound_at_zero=at_zero,
                            m=scalar.m,
                            tau=search.tau,
                            r_max=search.r_max,
                            seed=config.seed if config.synthetic_path else None,
                        ))
        except (ValueError, IngestError) as exc:
            errors.append(f"{input_id}: {exc}")
    return certificates, errors


def write_certificates(certificates, stream) -> None:
    for cert in certificates:
        stream.write(json.dumps(cert.to_record(), sort_keys=True) + "\n")


def read_certificates(path) -> list[dict]:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def curve_table(records: list[dict], grid) -> list[dict]:
    """Certified fraction of inputs at each grid radius, per group.

    Groups are (measure, method, threshold); an unbounded radius counts at
    every grid point. Fractions are non-increasing along the grid.
    """
    if not records:
        raise ValueError("empty certificate set")
    groups: dict[tuple, dict[str, float]] = {}
    for rec in records:
        key = (rec["measure"], rec["method"], rec["threshold"])
        radius = math.inf if rec["radius"] == "unbounded" else float(rec["radius"])
        groups.setdefault(key, {})[rec["input_id"]] = radius
    rows = []
    for (measure, method, threshold) in sorted(groups):
        radii = np.array(list(groups[(measure, method, threshold)].values()))
        for r in grid:
            rows.append({
                "radius": float(r),
                "threshold": threshold,
                "method": method,
                "measure": measure,
                "certified_fraction": float(np.mean(radii >= r)),
            })
    return rows


def write_curve_csv(rows, stream) -> None:
    writer = csv.DictWriter(
        stream, fieldnames=["radius", "threshold", "method", "measure", "certified_fraction"]
    )
    writer.writeheader()
    writer.writerows(rows)


@click.group()
def main():
    """Certified confidence bounds for Gaussian-smoothed classifiers."""


def _measure_kinds(names):
    return tuple(MeasureKind(name) for name in names)


@main.command()
@click.option("--input", "input_path", type=click.Path(), default=None,
              help="CSV or .npz score-sample file.")
@click.option("--synthetic", "synthetic_path", type=click.Path(), default=None,
              help="JSON synthetic-classifier spec.")
@click.option("--sigma", type=float, required=True, help="Smoothing noise scale.")
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True,
              help="Certificate failure probability.")
@click.option("--levels", "n_levels", type=int, default=DEFAULT_LEVELS, show_default=True)
@click.option("--tau", type=float, default=DEFAULT_TAU, show_default=True,
              help="Radius search precision.")
@click.option("--rmax", type=float, default=None, help="Search ceiling (default 50*sigma).")
@click.option("--measure", "measures", multiple=True,
              type=click.Choice([m.value for m in MeasureKind]),
              default=("average-score",), show_default=True)
@click.option("--method", "methods", multiple=True, type=click.Choice(METHODS),
              default=("cdf", "naive"), show_default=True)
@click.option("--threshold", "thresholds", multiple=True, type=float,
              default=(0.5,), show_default=True)
@click.option("--m", "m", type=int, default=DEFAULT_M, show_default=True,
              help="Noise samples per synthetic input.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None,
              help="JSON-lines output path (default: stdout).")
def certify(input_path, synthetic_path, sigma, alpha, n_levels, tau, rmax,
            measures, methods, thresholds, m, seed, out):
    """Certify confidence radii for every input in a batch."""
    try:
        config = RunConfig(
            sigma=sigma, input_path=input_path, synthetic_path=synthetic_path,
            alpha=alpha, m=m, n_levels=n_levels, measures=_measure_kinds(measures),
            thresholds=tuple(thresholds), methods=tuple(methods), tau=tau,
            r_max=rmax, seed=seed,
        )
        certificates, errors = certify_batch(config)
    except (ValueError, IngestError) as exc:
        raise click.ClickException(str(exc))
    if out is None:
        write_certificates(certificates, sys.stdout)
    else:
        with open(out, "w") as fh:
            write_certificates(certificates, fh)
    if errors:
        for err in errors:
            click.echo(f"error: {err}", err=True)
        raise SystemExit(1)


@main.command()
@click.option("--certificates", "cert_path", type=click.Path(exists=True), required=True,
              help="JSON-lines file produced by the certify command.")
@click.option("--grid-max", type=float, default=1.0, show_default=True)
@click.option("--grid-step", type=float, default=0.05, show_default=True)
@click.option("--out", type=click.Path(), required=True, help="Curve CSV path.")
@click.option("--plot/--no-plot", default=True, show_default=True,
              help="Also render the curve to a PNG next to the CSV.")
def curve(cert_path, grid_max, grid_step, out, plot):
    """Tabulate certified fraction vs. radius from a certificate file."""
    records = read_certificates(cert_path)
    grid = np.arange(0.0, grid_max + 1e-12, grid_step)
    try:
        rows = curve_table(records, grid)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    with open(out, "w", newline="") as fh:
        write_curve_csv(rows, fh)
    if plot:
        from .report import render_curve_figure

        figure_path = Path(out).with_suffix(".png")
        render_curve_figure(rows, figure_path)
        click.echo(f"wrote {out} and {figure_path}", err=True)
    else:
        click.echo(f"wrote {out}", err=True)


if __name__ == "__main__":
    main()
