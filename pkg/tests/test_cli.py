import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from hiddennode.cli import CurveSample, RunConfig, main, parse_grid
from hiddennode.errors import ConfigurationError, DomainError
from hiddennode.siso import siso_copt_exact


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestSisoCopt:
    def test_free_space(self, capsys):
        code, out, _ = run(capsys, "siso-copt", "--alpha", "2")
        assert code == 0
        assert json.loads(out)["c_opt"] == 0.0

    def test_alpha_four(self, capsys):
        code, out, _ = run(capsys, "siso-copt", "--alpha", "4")
        report = json.loads(out)
        assert code == 0
        assert report["c_opt"] == pytest.approx(2.299, abs=5e-4)
        assert report["method"] == "exact-lambert"
        assert report["stationarity_residual"] <= 1e-8

    def test_poly(self, capsys):
        _, out, _ = run(capsys, "siso-copt", "--alpha", "3", "--poly")
        report = json.loads(out)
        assert report["c_opt"] == pytest.approx(1.245)
        assert report["method"] == "polynomial"

    def test_domain_error(self, capsys):
        code, _, err = run(capsys, "siso-copt", "--alpha", "1.5")
        assert code == 2
        assert "alpha" in err


class TestMimoBetaopt:
    def test_alpha_four(self, capsys):
        code, out, _ = run(capsys, "mimo-betaopt", "--alpha", "4")
        assert code == 0
        assert json.loads(out)["beta_opt"] == pytest.approx(1.6816, abs=1e-3)

    def test_free_space(self, capsys):
        _, out, _ = run(capsys, "mimo-betaopt", "--alpha", "2")
        assert json.loads(out)["beta_opt"] == 0.0


class TestMaxRate:
    def test_siso(self, capsys):
        _, out, _ = run(capsys, "max-rate", "--alpha", "4", "--bandwidth", "1e6")
        assert json.loads(out)["rate"] == pytest.approx(1.1496e6, rel=1e-3)

    def test_mimo(self, capsys):
        _, out, _ = run(capsys, "max-rate", "--alpha", "4", "--n-antennas", "4", "--bandwidth", "1e6", "--duty", "0.5")
        report = json.loads(out)
        assert report["rate"] == pytest.approx(3.36e6, rel=0.01)
        assert report["duty_valid"] is False


class TestGrid:
    def test_inclusive(self):
        g = parse_grid("2:6:0.1")
        assert len(g) == 41
        assert g[0] == 2.0 and g[-1] == 6.0

    @pytest.mark.parametrize("spec", ["3:2:0.1", "0:1:0", "a:b:c", "1:2"])
    def test_invalid(self, spec):
        with pytest.raises(ConfigurationError):
            parse_grid(spec)


class TestCurve:
    def test_siso_copt_csv(self, tmp_path, capsys):
        out = tmp_path / "c.csv"
        code, _, _ = run(capsys, "curve", "--kind", "siso-copt", "--grid", "2:6:0.1", "--out", str(out))
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 41
        assert set(rows[0]) == {"x", "y", "kind"}
        y = [float(r["y"]) for r in rows]
        assert np.all(np.diff(y) > 0)
        assert all(r["kind"] == "siso-copt" for r in rows)

    def test_poisson_json(self, tmp_path, capsys):
        out = tmp_path / "pi.json"
        code, _, _ = run(
            capsys, "curve", "--kind", "poisson-pi", "--grid", "0.25:10:0.01",
            "--format", "json", "--out", str(out),
        )
        assert code == 0
        data = json.loads(out.read_text())
        assert set(data[0]) == {"x", "y", "kind"}
        y = np.array([d["y"] for d in data])
        k = int(np.argmin(y))
        assert 0 < k < len(y) - 1
        assert abs(data[k]["x"] - siso_copt_exact(4).c_opt) <= 0.01

    def test_empty_grid_writes_nothing(self, tmp_path, capsys):
        out = tmp_path / "none.csv"
        code, _, _ = run(capsys, "curve", "--kind", "siso-copt", "--grid", "6:2:0.1", "--out", str(out))
        assert code == 2
        assert not out.exists()

    def test_csv_and_json_values_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "a.json"
        for path, fmt in ((a, "csv"), (b, "json")):
            run(capsys, "curve", "--kind", "mimo-objective", "--alpha", "3", "--grid", "0.1:4:0.3",
                "--format", fmt, "--out", str(path))
        rows = list(csv.DictReader(a.open()))
        data = json.loads(b.read_text())
        assert [(float(r["x"]), float(r["y"])) for r in rows] == [(d["x"], d["y"]) for d in data]
        assert [r["y"] for r in rows] == [repr(d["y"]) for d in data]

    def test_stdout(self, capsys):
        code, out, _ = run(capsys, "curve", "--kind", "siso-objective", "--alpha", "4", "--grid", "1:2:0.5")
        assert code == 0
        assert out.splitlines() == ["x,y,kind", "1.0,1.0,siso-objective",
                                    f"1.5,{repr((2**1.5 - 1) ** 0.5 / 1.5)},siso-objective",
                                    f"2.0,{repr(3 ** 0.5 / 2)},siso-objective"]

    def test_curve_sample_validation(self):
        with pytest.raises(ConfigurationError):
            CurveSample(1.0, 1.0, "nope")
        with pytest.raises(DomainError):
            CurveSample(1.0, float("nan"), "siso-copt")


class TestValidate:
    def test_no_nodes(self, capsys):
        code, out, _ = run(capsys, "validate", "--rho", "0", "--trials", "2000")
        report = json.loads(out)
        assert code == 0
        assert report["p_hat"] == 0 and report["p_analytic"] == 0 and report["agree"]

    def test_inflated_preset(self, capsys):
        code, out, _ = run(capsys, "validate", "--preset", "inflated", "--target-p", "0.2",
                           "--trials", "50000", "--seed", "3")
        report = json.loads(out)
        assert code == 0
        assert report["p_analytic"] == pytest.approx(0.2)

    def test_negative_control(self, capsys):
        code, out, _ = run(capsys, "validate", "--preset", "inflated", "--trials", "50000",
                           "--seed", "3", "--analytic-scale", "1.5")
        assert code == 3
        assert json.loads(out)["agree"] is False

    def test_bad_config(self, capsys):
        code, _, _ = run(capsys, "validate", "--trials", "0")
        assert code == 2


class TestConfig:
    def test_round_trip(self):
        cfg = RunConfig(alpha=3.5, grid="1:2:0.5", seed=9, duty=0.25)
        assert RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg

    def test_unknown_keys(self):
        with pytest.raises(ConfigurationError):
            RunConfig.from_dict({"alpha": 3, "colour": "red"})

    def test_db_conversion(self):
        cfg = RunConfig(eta_i_db=-30, loss_db=3)
        assert cfg.eta_i == pytest.approx(1e-3)
        assert cfg.loss_l == pytest.approx(10**0.3)

    def test_file_and_flag_override(self, tmp_path, capsys):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"alpha": 3.0, "kind": "siso-copt", "grid": "2:3:0.5"}))
        _, out, _ = run(capsys, "siso-copt", "--config", str(path))
        assert json.loads(out)["alpha"] == 3.0
        _, out, _ = run(capsys, "siso-copt", "--config", str(path), "--alpha", "5")
        assert json.loads(out)["alpha"] == 5.0

    def test_unknown_key_in_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"alfa": 3.0}))
        code, _, err = run(capsys, "siso-copt", "--config", str(path))
        assert code == 2 and "alfa" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hiddennode", "siso-copt", "--alpha", "1.5"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
