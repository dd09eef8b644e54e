import csv
import io
import json
import math

import numpy as np
import pytest

from qubit_scatter import cli
from qubit_scatter.config import parse_config_text


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def cfg(tmp_path):
    def make(text):
        p = tmp_path / "scenario.cfg"
        p.write_text(text)
        return str(p)

    return make


def test_afc_resonance_and_asymmetry(capsys, cfg):
    code, out, _ = run(capsys, "afc", "--config", cfg("ratio_min = 0.998\nratio_max = 1.002\nratio_steps = 5\nx_mm = 5\n"))
    assert code == 0
    data = rows(out)
    centre = data[2]
    assert float(centre["omega_over_Omega"]) == pytest.approx(1.0)
    assert float(centre["transmittance"]) <= 0.05
    assert float(centre["reflectance"]) < 0.99
    assert float(centre["T_sq_stationary"]) <= 1e-20
    # 17 significant digits
    assert len(centre["reflectance"].split("e")[0].replace(".", "").lstrip("-")) == 17


def test_afc_asymmetry_at_one_millimetre():
    sc = parse_config_text("x_mm = 1\n")
    p = sc.params
    from qubit_scatter.fields import large_time_intensity

    up = large_time_intensity(1e-3, p, p.omega_q + 0.5 * p.gamma_rad, "forward")
    down = large_time_intensity(1e-3, p, p.omega_q - 0.5 * p.gamma_rad, "forward")
    assert abs(up - down) > 1e-3


def test_afc_far_field_collapses_to_stationary():
    sc = parse_config_text("x_mm = 3000\nratio_min = 0.99\nratio_max = 1.01\nratio_steps = 21\n")
    table = cli.cmd_afc(sc)
    cols = table.columns
    for r in table.rows:
        d = dict(zip(cols, r))
        assert abs(d["transmittance"] - d["T_sq_stationary"]) <= 1e-2
        assert abs(d["reflectance"] - d["R_sq_stationary"]) <= 1e-2


def test_map2d_causality_and_order(capsys, cfg):
    text = "x_min_mm = 100\nx_max_mm = 500\nx_steps = 5\nt_ns = 1\nratio_steps = 3\nratio_min = 0.99\nratio_max = 1.01\n"
    code, out, _ = run(capsys, "map2d", "--config", cfg(text), "--threads", "3")
    assert code == 0
    data = rows(out)
    assert len(data) == 15
    xs = [float(r["x_mm"]) for r in data]
    assert xs == sorted(xs)
    for r in data:
        if float(r["x_mm"]) < 300:
            assert r["status"] == "ok"
        else:
            assert r["status"] in ("causality", "singularity") and r["intensity"] == ""


def test_map2d_thread_count_does_not_change_output(capsys, cfg):
    text = "x_min_mm = 1\nx_max_mm = 400\nx_steps = 9\nratio_steps = 4\n"
    path = cfg(text)
    _, one, _ = run(capsys, "map2d", "--config", path, "--threads", "1")
    _, four, _ = run(capsys, "map2d", "--config", path, "--threads", "4")
    assert one == four


def test_map2d_backward_resonance(capsys, cfg):
    text = "x_min_mm = -1000\nx_max_mm = -900\nx_steps = 2\nratio_min = 0.9999\nratio_max = 1.0001\nratio_steps = 3\nt_ns = 200\ndirection = backward\n"
    code, out, _ = run(capsys, "map2d", "--config", cfg(text))
    centre = [r for r in rows(out) if abs(float(r["omega_over_Omega"]) - 1) < 1e-12]
    assert all(abs(float(r["intensity"]) - 1) < 1e-2 for r in centre)


def test_timeseries_frequency(capsys, cfg):
    code, out, _ = run(capsys, "timeseries", "--config", cfg("detuning_gamma = 1.5\ncarrier_stride = 4\n"), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["fit_omega_over_gamma"] == pytest.approx(1.5, rel=1e-2)
    assert doc["columns"][0] == "t_ns"


def test_spatial_curves(capsys, cfg):
    code, out, _ = run(capsys, "spatial", "--config", cfg("x_min_mm = 120\nx_max_mm = 600\nx_steps = 300\n"))
    data = rows(out)
    t = np.array([float(r["transmittance"]) for r in data]) - 0.5
    r_ = np.array([float(r["reflectance"]) for r in data]) - 0.5
    assert np.any(t > 0) and np.any(t < 0)
    assert np.all(np.sign(t[np.abs(t) > 1e-4]) == -np.sign(r_[np.abs(t) > 1e-4]))


def test_asymptotics_slope(capsys, cfg):
    text = "x_min_mm = 600\nx_max_mm = 6000\nx_steps = 10\nt_min_ns = 800\nt_max_ns = 800\ndetuning_gamma = 0.5\n"
    code, out, _ = run(capsys, "asymptotics", "--config", cfg(text))
    data = [r for r in rows(out) if r["x_mm"] and r["status"] == "ok"]
    data = data[::2]  # t grid has two identical entries
    xs = np.array([float(r["x_mm"]) for r in data])
    res = np.array([float(r["residual_full_minus_stationary"]) for r in data])
    slope = np.polyfit(np.log(xs), np.log(res), 1)[0]
    assert abs(slope + 1) <= 0.1


def test_asymptotics_precondition_rows(capsys):
    code, out, _ = run(capsys, "asymptotics")
    assert code == 0
    assert any(r["status"] == "precondition" for r in rows(out))


def test_config_errors_exit_2(capsys, cfg):
    code, _, err = run(capsys, "afc", "--config", cfg("gamma_rad_ghz = 0\n"))
    assert code == 2 and "gamma_rad" in err
    code, _, err = run(capsys, "afc", "--config", cfg("oops\n"))
    assert code == 2 and "line 1" in err
    code, _, _ = run(capsys, "afc", "--config", "/no/such/file")
    assert code == 2


def test_convergence_error_exit_3(capsys, monkeypatch):
    from qubit_scatter.errors import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("forced")

    monkeypatch.setitem(cli.COMMANDS, "afc", boom)
    code, _, err = run(capsys, "afc")
    assert code == 3 and "forced" in err


def test_out_file(tmp_path, capsys):
    out = tmp_path / "afc.csv"
    assert cli.main(["afc", "--out", str(out)]) == 0
    assert out.read_text().startswith("omega_over_Omega,x_mm,transmittance")


def test_validate_quick(capsys):
    code, out, _ = run(capsys, "validate", "--skip-mode-sum")
    report = json.loads(out)
    names = {c["name"] for c in report["checks"]}
    assert {"oracle_I1", "oracle_J2", "mutation_detected", "unitarity", "length_independence"} <= names
    assert report["passed"] and code == 0


def test_validate_failure_exit_1(capsys, monkeypatch):
    from qubit_scatter import validation

    real = validation.kernel_oracle_error
    monkeypatch.setattr(validation, "kernel_oracle_error", lambda *a: 1.0 if a[0] == "I2" else real(*a))
    code, out, _ = run(capsys, "validate", "--skip-mode-sum")
    report = json.loads(out)
    assert code == 1 and not report["passed"]
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert failed == ["oracle_I2"]


def test_convergence_failure_is_a_failed_check(monkeypatch):
    from qubit_scatter import validation
    from qubit_scatter.errors import ConvergenceError

    def boom(*a):
        raise ConvergenceError("no")

    monkeypatch.setattr(validation, "kernel_oracle_error", boom)
    checks = validation.run_checks(include_mode_sum=False)
    oracle = [c for c in checks if c.name.startswith("oracle_")]
    assert oracle and all(not c.passed and c.measured == math.inf for c in oracle)
