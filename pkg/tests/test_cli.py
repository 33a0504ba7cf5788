import hashlib
import json
import math

import pytest

from quietlaser import design
from quietlaser.cli import main, parse_grid


def _json(path):
    return json.loads(path.read_text())


def _csv_rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return lines[0].split(","), [list(map(float, ln.split(","))) for ln in lines[1:]]


def test_grid_syntax():
    g = parse_grid("0.01:20:200log")
    assert g.size == 200 and g[0] == pytest.approx(0.01) and g[-1] == pytest.approx(20)
    assert parse_grid("0:1:11lin")[5] == pytest.approx(0.5)
    for bad in ("1:2", "0:1:5log", "a:b:3lin", "2:1:3lin"):
        with pytest.raises(Exception):
            parse_grid(bad)


def test_analytic_minimum_noise_point(tmp_path):
    rc = main(["analytic", "--gamma", "1.25", "--rabi", "3.5355339", "--omega-grid", "0.01:20:200log", "--out-dir", str(tmp_path)])
    assert rc == 0
    summary = _json(tmp_path / "summary.json")
    assert summary["schema_version"] == 1
    assert summary["detected_level"] == pytest.approx(0.875, abs=1e-6)
    assert summary["A"] == pytest.approx(0.2, abs=1e-6)
    header, rows = _csv_rows(tmp_path / "spectrum.csv")
    assert header == ["omega", "s_over_r"]
    assert len(rows) == 200
    assert (tmp_path / "spectrum.csv").read_text().startswith("# schema_version: 1\n")


def test_analytic_a_equal_one(tmp_path):
    assert main(["analytic", "--gamma", "1", "--rabi", "1.4142136", "--out-dir", str(tmp_path)]) == 0
    assert _json(tmp_path / "summary.json")["fano0"] == pytest.approx(0.25, abs=1e-7)


def test_missing_rabi_is_usage_error(tmp_path, capsys):
    assert main(["analytic", "--gamma", "1", "--out-dir", str(tmp_path)]) == 2
    assert "usage" in capsys.readouterr().err


def test_invalid_params_exit_2(tmp_path):
    assert main(["analytic", "--gamma", "-1", "--rabi", "1", "--out-dir", str(tmp_path)]) == 2
    assert main(["analytic", "--gamma", "1", "--rabi", "1", "--omega-grid", "junk", "--out-dir", str(tmp_path)]) == 2
    assert main(["nonsense"]) == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# minimum-noise point\ngamma = 1.25\nrabi = 3.5355339059327378\nomega-grid = 0.1:10:5log\n")
    out = tmp_path / "out"
    assert main(["--config", str(cfg), "analytic", "--out-dir", str(out)]) == 0
    s = _json(out / "summary.json")
    assert s["a"] == pytest.approx(0.25, rel=1e-12)
    assert s["config"]["omega_grid"] == "0.1:10:5log"
    assert main(["--config", str(cfg), "analytic", "--gamma", "1.0", "--rabi", "1.4142135623730951", "--out-dir", str(out)]) == 0
    assert _json(out / "summary.json")["a"] == pytest.approx(1.0, rel=1e-12)
    cfg.write_text("bogus = 1\n")
    assert main(["--config", str(cfg), "analytic", "--out-dir", str(out)]) == 2


def _simulate(out, *extra):
    args = ["simulate", "--gamma", "1.25", "--rabi", "3.5355339059327378", "--n-traj", "50",
            "--horizon", "40200", "--window", "200", "--segment", "1340", "--out-dir", str(out)]
    return main(args + list(extra))


def _digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.mark.slow
def test_simulate_deterministic_and_accurate(tmp_path):
    assert _simulate(tmp_path / "a", "--seed", "42") == 0
    assert _simulate(tmp_path / "b", "--seed", "42", "--workers", "3") == 0
    for name in ("fano.json", "spectrum_estimated.csv"):
        assert _digest(tmp_path / "a" / name) == _digest(tmp_path / "b" / name)
    report = _json(tmp_path / "a" / "fano.json")
    assert report["seed"] == 42 and report["n_windows"] == 10_000
    assert 0.49 <= report["fano"] <= 0.55
    header, rows = _csv_rows(tmp_path / "a" / "spectrum_estimated.csv")
    assert header == ["omega", "s_over_r", "stderr"]


@pytest.mark.slow
def test_simulate_poisson_control(tmp_path):
    assert _simulate(tmp_path, "--seed", "7", "--poisson-control") == 0
    assert 0.95 <= _json(tmp_path / "fano.json")["fano"] <= 1.05


def test_simulate_records_seed_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QUIETLASER_SEED", "1234")
    args = ["simulate", "--gamma", "1.25", "--rabi", "3.5355339", "--n-traj", "2", "--horizon", "2000",
            "--window", "50", "--out-dir", str(tmp_path)]
    assert main(args) == 0
    report = _json(tmp_path / "fano.json")
    assert report["seed"] == 1234
    assert report["env"]["QUIETLASER_SEED"] == "1234"


def test_simulate_frequency_guard(tmp_path):
    args = ["simulate", "--gamma", "1.25", "--rabi", "3.5355339", "--n-traj", "2", "--horizon", "2000",
            "--omega-grid", "0.001:1:5log", "--seed", "1", "--out-dir", str(tmp_path)]
    assert main(args) == 2


def test_design_paper_example(tmp_path):
    assert main(["design", "--paper-example", "--tau-p", "1e-6", "--nu", "1.42e9", "--out-dir", str(tmp_path)]) == 0
    rep = _json(tmp_path / "design.json")
    assert rep["root_count"] == 2
    assert [r["gamma"] * 1e-6 for r in rep["roots"]] == pytest.approx([1.25, 5.0], rel=1e-12)
    assert rep["roots"][0]["detected_level"] == pytest.approx(0.875, abs=1e-9)
    ex = rep["paper_example"]
    assert ex["volume"] / 1e-12 == pytest.approx(244, abs=2)
    assert ex["plate_side"] == pytest.approx(design.paper_design_example(1e-6).plate_side, rel=1e-15)
    assert rep["units"]["volume"] == "m^3"


def test_design_no_steady_state_exit_3(tmp_path):
    j = 1e6
    volume = design.coupling_constant() * 1.0 / (2 * j) ** 2  # rabi = 2 J with mu = J tau_p = 1
    assert main(["design", "--pump-rate", str(j), "--tau-p", "1e-6", "--volume", repr(volume), "--out-dir", str(tmp_path)]) == 3


def test_design_requires_inputs(tmp_path):
    assert main(["design", "--tau-p", "1e-6", "--out-dir", str(tmp_path)]) == 2


def test_validate_quick(capsys):
    assert main(["validate", "--quick"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_validate_injected_fault(capsys):
    assert main(["validate", "--quick", "--inject-fault"]) == 1
    assert "injected fault" in capsys.readouterr().err


@pytest.mark.slow
def test_validate_full():
    assert main(["validate"]) == 0
