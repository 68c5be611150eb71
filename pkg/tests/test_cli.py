"""CLI, ingestion, batch certification, and curve-table tests."""

import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from certconf import MeasureKind, Sigma
from certconf.cli import (
    IngestError,
    RunConfig,
    certify_batch,
    curve_table,
    ingest_samples,
    main,
)

SIGMA = Sigma(0.25)

CSV_2_INPUTS = """input_id,sample_id,score_class_0,score_class_1
a,0,0.6,0.4
a,1,0.7,0.3
a,2,0.65,0.35
b,0,0.2,0.8
b,1,0.3,0.7
b,2,0.25,0.75
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def synthetic_spec(tmp_path, inputs, sigma=0.25, dimension=8):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"sigma": sigma, "dimension": dimension, "inputs": inputs}))
    return path


def test_ingest_well_formed(tmp_path):
    pairs = ingest_samples(write(tmp_path, "ok.csv", CSV_2_INPUTS), SIGMA)
    assert [name for name, _ in pairs] == ["a", "b"]
    assert all(ss.scores.shape == (3, 2) for _, ss in pairs)


def test_ingest_bad_row_sum_names_line(tmp_path):
    bad = CSV_2_INPUTS.replace("a,1,0.7,0.3", "a,1,0.9,0.6")
    with pytest.raises(IngestError, match=":3:"):
        ingest_samples(write(tmp_path, "bad.csv", bad), SIGMA)


def test_ingest_empty_file(tmp_path):
    with pytest.raises(IngestError, match="no inputs"):
        ingest_samples(write(tmp_path, "empty.csv", ""), SIGMA)


def test_ingest_inconsistent_columns(tmp_path):
    bad = CSV_2_INPUTS + "c,0,0.5,0.3,0.2\n"
    with pytest.raises(IngestError, match="columns"):
        ingest_samples(write(tmp_path, "cols.csv", bad), SIGMA)


def test_ingest_npz_variant(tmp_path):
    path = tmp_path / "scores.npz"
    rng = np.random.default_rng(0)
    np.savez(path, a=rng.dirichlet(np.ones(3), size=5), b=rng.dirichlet(np.ones(3), size=5))
    pairs = ingest_samples(path, SIGMA)
    assert [name for name, _ in pairs] == ["a", "b"]
    assert pairs[0][1].k == 3


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(sigma=0.25)  # neither input source
    with pytest.raises(ValueError):
        RunConfig(sigma=0.25, input_path="x", methods=())
    with pytest.raises(ValueError):
        RunConfig(sigma=0.25, input_path="x", thresholds=(1.5,))
    with pytest.raises(ValueError):
        RunConfig(sigma=0.25, input_path="x", methods=("bogus",))


def test_certify_batch_flat_contrast(tmp_path):
    spec = synthetic_spec(tmp_path, [
        {"id": "flat", "classifier": {"kind": "flat", "value": 0.55}},
    ])
    config = RunConfig(sigma=0.25, synthetic_path=str(spec), m=5000,
                       methods=("cdf", "naive"), thresholds=(0.5,))
    certs, errors = certify_batch(config)
    assert not errors
    by_method = {c.method: c for c in certs}
    # sampled flat scores: DKW clips the top-level probability below 1, so the
    # CDF radius is finite but far beyond the mean-only certificate
    assert by_method["cdf"].radius > 5 * by_method["naive"].radius > 0


def test_certify_batch_threshold_too_high(tmp_path):
    spec = synthetic_spec(tmp_path, [
        {"id": "weak", "classifier": {"kind": "flat", "value": 0.55}},
    ])
    config = RunConfig(sigma=0.25, synthetic_path=str(spec), m=1000,
                       methods=("cdf", "naive", "best-baseline"), thresholds=(0.999,))
    certs, _ = certify_batch(config)
    assert all(c.radius == 0.0 for c in certs)
    assert all(c.bound_at_zero < 0.999 for c in certs)


def test_certify_batch_margin_measure(tmp_path):
    spec = synthetic_spec(tmp_path, [
        {"id": "log", "classifier": {"kind": "logistic", "offset": -2.0, "temperature": 1.0}},
    ])
    config = RunConfig(sigma=0.25, synthetic_path=str(spec), m=2000,
                       measures=(MeasureKind.MARGIN,), thresholds=(0.0001,))
    certs, errors = certify_batch(config)
    assert not errors
    assert {c.measure for c in certs} == {"margin"}
    assert all(c.radius > 0 for c in certs if c.method == "cdf")


def test_certificate_records_carry_reproduction_fields(tmp_path):
    spec = synthetic_spec(tmp_path, [
        {"id": "flat", "classifier": {"kind": "flat", "value": 0.55}},
    ])
    config = RunConfig(sigma=0.25, synthetic_path=str(spec), m=500, seed=42)
    certs, _ = certify_batch(config)
    rec = certs[0].to_record()
    for key in ("sigma", "alpha", "n_levels", "tau", "seed", "method", "m", "r_max"):
        assert key in rec


def test_curve_table_fractions():
    records = [
        {"input_id": "a", "measure": "average-score", "method": "cdf",
         "threshold": 0.5, "radius": 0.3},
    ]
    rows = curve_table(records, [0.1, 0.2, 0.4])
    assert [r["certified_fraction"] for r in rows] == [1.0, 1.0, 0.0]


def test_curve_table_unbounded_counts_everywhere():
    records = [
        {"input_id": "a", "measure": "average-score", "method": "cdf",
         "threshold": 0.5, "radius": "unbounded"},
        {"input_id": "b", "measure": "average-score", "method": "cdf",
         "threshold": 0.5, "radius": 0.0},
    ]
    rows = curve_table(records, [0.0, 10.0, 1000.0])
    assert [r["certified_fraction"] for r in rows] == [1.0, 0.5, 0.5]


def test_curve_table_monotone_and_rejects_empty():
    with pytest.raises(ValueError):
        curve_table([], [0.1])
    rng = np.random.default_rng(1)
    records = [
        {"input_id": f"i{j}", "measure": "m", "method": "cdf", "threshold": 0.5,
         "radius": float(rng.uniform(0, 1))}
        for j in range(50)
    ]
    rows = curve_table(records, np.linspace(0, 1, 11))
    fractions = [r["certified_fraction"] for r in rows]
    assert all(x >= y for x, y in zip(fractions, fractions[1:]))


def test_cli_end_to_end(tmp_path):
    spec = synthetic_spec(tmp_path, [
        {"id": "flat", "classifier": {"kind": "flat", "value": 0.55}},
        {"id": "log", "classifier": {"kind": "logistic", "offset": -1.0, "temperature": 2.0}},
    ])
    out = tmp_path / "certs.jsonl"
    runner = CliRunner()
    result = runner.invoke(main, [
        "certify", "--synthetic", str(spec), "--sigma", "0.25", "--m", "1000",
        "--threshold", "0.5", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(records) == 4  # 2 inputs x 2 default methods x 1 threshold

    curve_out = tmp_path / "curve.csv"
    result = runner.invoke(main, [
        "curve", "--certificates", str(out), "--out", str(curve_out),
        "--grid-max", "0.5", "--grid-step", "0.1",
    ])
    assert result.exit_code == 0, result.output
    assert curve_out.exists()
    assert (tmp_path / "curve.png").exists()
    header = curve_out.read_text().splitlines()[0]
    assert header == "radius,threshold,method,measure,certified_fraction"


def test_cli_determinism_byte_identical(tmp_path):
    spec = synthetic_spec(tmp_path, [
        {"id": "log", "classifier": {"kind": "logistic", "offset": -0.5, "temperature": 1.5}},
    ])
    runner = CliRunner()
    outputs = []
    for name in ("one.jsonl", "two.jsonl"):
        out = tmp_path / name
        result = runner.invoke(main, [
            "certify", "--synthetic", str(spec), "--sigma", "0.25", "--m", "2000",
            "--seed", "7", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_cli_unbounded_serialized_as_string(tmp_path):
    # force an unbounded record through a tiny r_max on an easily-met threshold
    spec = synthetic_spec(tmp_path, [
        {"id": "flat", "classifier": {"kind": "flat", "value": 0.9}},
    ])
    out = tmp_path / "c.jsonl"
    runner = CliRunner()
    result = runner.invoke(main, [
        "certify", "--synthetic", str(spec), "--sigma", "0.25", "--m", "1000",
        "--threshold", "0.05", "--rmax", "0.01", "--method", "cdf", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    rec = json.loads(out.read_text().splitlines()[0])
    assert rec["radius"] == "unbounded"


def test_cli_missing_input_is_an_error(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["certify", "--sigma", "0.25"])
    assert result.exit_code != 0
