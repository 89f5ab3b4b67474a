import json

import numpy as np
import pytest

from conftest import INTERIOR_STABLE, MULTI2_CASE, REFERENCE
from ppsdyn.cli import main
from ppsdyn.data import synthesize
from ppsdyn.model import ModelParams, State


@pytest.fixture()
def params_file(tmp_path):
    path = tmp_path / "case.params"
    ModelParams(**INTERIOR_STABLE).save(path)
    return str(path)


@pytest.fixture()
def reference_file(tmp_path):
    path = tmp_path / "reference.params"
    ModelParams(**REFERENCE).save(path)
    return str(path)


def test_simulate_writes_artifacts(tmp_path, params_file, capsys):
    out = tmp_path / "run"
    code = main(["simulate", "--params", params_file, "--s0", "4,3,2",
                 "--t-end", "50", "--out", str(out)])
    assert code == 0
    assert (out / "trajectory.csv").exists()
    assert (out / "timeseries.svg").exists()
    assert (out / "phase.svg").exists()
    text = capsys.readouterr().out
    assert "final state" in text
    svg = (out / "timeseries.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_simulate_subsystem_mask(tmp_path, params_file):
    out = tmp_path / "masked"
    code = main(["simulate", "--params", params_file, "--s0", "0,4,6",
                 "--subsystem", "predscav", "--t-end", "20",
                 "--out", str(out)])
    assert code == 0
    rows = (out / "trajectory.csv").read_text().splitlines()[1:]
    assert all(row.split(",")[1] == "0.0" for row in rows)


def test_missing_params_file_is_usage_error(tmp_path):
    code = main(["simulate", "--params", str(tmp_path / "nope.params"),
                 "--s0", "1,1,1", "--t-end", "5", "--out", str(tmp_path)])
    assert code == 1


def test_bad_state_string_is_usage_error(tmp_path, params_file):
    code = main(["simulate", "--params", params_file, "--s0", "1,1",
                 "--t-end", "5", "--out", str(tmp_path)])
    assert code == 1


def test_unknown_subsystem_is_usage_error(tmp_path, params_file, capsys):
    code = main(["simulate", "--params", params_file, "--s0", "1,1,1",
                 "--subsystem", "plankton", "--t-end", "5",
                 "--out", str(tmp_path)])
    assert code == 1
    capsys.readouterr()


def test_help_exits_zero(capsys):
    code = main(["--help"])
    assert code == 0
    assert "simulate" in capsys.readouterr().out


def test_analyze_report(tmp_path, reference_file, capsys):
    out = tmp_path / "analysis"
    code = main(["analyze", "--params", reference_file, "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "Interior" in text and "Stable" in text
    blob = json.loads((out / "equilibria.json").read_text())
    entries = {e["label"]: e for e in blob["equilibria"]}
    interior = entries["Interior"]
    assert interior["point"] == pytest.approx(
        [4.498453864146017, 1.16117816, 0.388951751], abs=1e-6)
    assert interior["stability"]["classification"] == "Stable"
    assert entries["PredScav"]["exists"] is False
    assert "interior_crosscheck" in blob


def test_analyze_flags_multiple_roots(tmp_path, capsys):
    path = tmp_path / "multi.params"
    ModelParams(**MULTI2_CASE).save(path)
    out = tmp_path / "analysis"
    code = main(["analyze", "--params", str(path), "--out", str(out)])
    assert code == 2
    assert "multiple" in capsys.readouterr().err.lower()
    # the report is still written for inspection
    blob = json.loads((out / "equilibria.json").read_text())
    entries = {e["label"]: e for e in blob["equilibria"]}
    assert entries["Interior"]["flag"] == "multiple_roots"


def test_synth_is_byte_reproducible(tmp_path, reference_file):
    out1 = tmp_path / "one"
    out2 = tmp_path / "two"
    argv = ["synth", "--params", reference_file, "--s0", "4.991,1.178,0.577",
            "--t-end", "5", "--points", "40", "--noise", "0.02", "--seed", "7"]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    assert ((out1 / "dataset.csv").read_bytes()
            == (out2 / "dataset.csv").read_bytes())
    assert ((out1 / "dataset.provenance.json").read_bytes()
            == (out2 / "dataset.provenance.json").read_bytes())


def test_synth_numerical_failure_exits_two(tmp_path):
    kw = dict(INTERIOR_STABLE)
    kw["r"] = 1e9
    path = tmp_path / "stiff.params"
    ModelParams(**kw).save(path)
    code = main(["synth", "--params", str(path), "--s0", "4,3,2",
                 "--t-end", "200", "--out", str(tmp_path)])
    assert code == 2


def test_estimate_rejects_short_dataset(tmp_path, reference_file):
    out = tmp_path / "data"
    assert main(["synth", "--params", reference_file,
                 "--s0", "4.991,1.178,0.577", "--t-end", "5",
                 "--points", "40", "--out", str(out)]) == 0
    csv = out / "dataset.csv"
    lines = csv.read_text().splitlines()
    csv.write_text("\n".join(lines[:3]) + "\n")  # header + 2 rows
    code = main(["estimate", "--dataset", str(csv), "--out", str(tmp_path)])
    assert code == 1


def test_estimate_end_to_end_and_reproducible(tmp_path, reference_file):
    data_dir = tmp_path / "data"
    assert main(["synth", "--params", reference_file,
                 "--s0", "4.991,1.178,0.577", "--t-end", "5",
                 "--points", "40", "--out", str(data_dir)]) == 0
    argv = ["estimate", "--dataset", str(data_dir / "dataset.csv"),
            "--seed", "0", "--epochs", "3", "--bfgs-iterations", "8"]
    out1 = tmp_path / "fit1"
    out2 = tmp_path / "fit2"
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    for name in ("report.json", "trace.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    assert (out1 / "fit.svg").exists()
    blob = json.loads((out1 / "report.json").read_text())
    assert blob["seed"] == 0
    assert len(blob["adam_trace"]) == 3


def test_estimate_from_survey_csv(tmp_path):
    survey = tmp_path / "survey.csv"
    p = ModelParams(**REFERENCE)
    ds = synthesize(p, State(4.991, 1.178, 0.577), np.linspace(0.0, 5.0, 12))
    raw = ds.raw_observations
    lines = ["year,hare,lynx,crow"]
    for year, row in zip(range(2000, 2012), raw):
        lines.append(f"{year},{float(row[0])!r},{float(row[1])!r},"
                     f"{float(row[2])!r}")
    survey.write_text("\n".join(lines) + "\n")
    smap = tmp_path / "map.json"
    smap.write_text(json.dumps({"hare": "prey", "lynx": "predator",
                                "crow": "scavenger"}))
    out = tmp_path / "fit"
    code = main(["estimate", "--dataset", str(survey),
                 "--species-map", str(smap), "--epochs", "2",
                 "--bfgs-iterations", "4", "--out", str(out)])
    assert code == 0
    assert (out / "report.json").exists()
