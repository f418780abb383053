"""CLI contract: exit codes, file formats, determinism."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from dunkl.cli import main


def run_cli(args, **kw):
    return subprocess.run(
        [sys.executable, "-m", "dunkl.cli", *args], capture_output=True, text=True, timeout=600, **kw
    )


class TestKernelCommand:
    def test_unit_value_at_zero(self, capsys):
        code = main(["kernel", "--alpha", "0.5", "--z", "0"])
        out = capsys.readouterr().out
        assert code == 0
        row = out.splitlines()[1].split(",")
        assert float(row[2]) == pytest.approx(1.0)
        assert float(row[3]) == 0.0

    def test_both_modes_agree(self, capsys):
        code = main(["kernel", "--alpha", "0.5", "--z", "1", "--mode", "both"])
        out = capsys.readouterr().out
        assert code == 0
        rows = [line.split(",") for line in out.splitlines()[1:]]
        assert len(rows) == 2
        assert abs(float(rows[0][2]) - float(rows[1][2])) < 1e-10
        assert float(rows[0][5]) < 1e-10

    def test_invalid_order_exits_2(self, capsys):
        code = main(["kernel", "--alpha", "-1", "--z", "0"])
        err = capsys.readouterr().err
        assert code == 2
        assert "alpha > -1/2" in err

    def test_json_format(self, capsys):
        code = main(["kernel", "--alpha", "0.5", "--z", "2j", "--format", "json"])
        out = capsys.readouterr().out
        assert code == 0
        payload = json.loads(out)
        assert payload[0]["z_im"] == 2.0


class TestTransformCommand:
    def make_samples(self, tmp_path, n=257, width=10.0):
        xs = np.linspace(-width, width, n)
        lines = ["x,f_re"] + [f"{x},{math.exp(-x * x)}" for x in xs]
        path = tmp_path / "samples.csv"
        path.write_text("\n".join(lines) + "\n")
        return path

    def test_gaussian_spectrum(self, tmp_path, capsys):
        path = self.make_samples(tmp_path)
        out_path = tmp_path / "spec.csv"
        code = main(["transform", "--alpha", "0.5", "--input", str(path), "--out", str(out_path), "--nx", "256", "--n-lambda", "256"])
        assert code == 0
        rows = [line.split(",") for line in out_path.read_text().splitlines()[1:]]
        lam = np.array([float(r[0]) for r in rows])
        re = np.array([float(r[1]) for r in rows])
        want = math.gamma(1.5) * np.exp(-(lam**2) / 4.0)
        mask = np.abs(lam) <= 6.0
        assert np.max(np.abs(re[mask] - want[mask])) < 1e-6

    def test_roundtrip_flag(self, tmp_path):
        path = self.make_samples(tmp_path)
        out_path = tmp_path / "back.csv"
        code = main(["transform", "--alpha", "0.5", "--input", str(path), "--roundtrip", "--out", str(out_path), "--nx", "256", "--n-lambda", "256"])
        assert code == 0
        rows = [line.split(",") for line in out_path.read_text().splitlines()[1:]]
        xs = np.array([float(r[0]) for r in rows])
        vals = np.array([float(r[1]) for r in rows])
        assert np.max(np.abs(vals - np.exp(-(xs**2)))) < 1e-6

    def test_empty_file_rejected(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("")
        code = main(["transform", "--alpha", "0.5", "--input", str(path)])
        assert code == 2
        assert "empty" in capsys.readouterr().err

    def test_asymmetric_grid_rejected(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("x,f_re\n-1.0,1\n0.0,1\n2.0,1\n3.0,1\n")
        code = main(["transform", "--alpha", "0.5", "--input", str(path)])
        assert code == 2
        assert "symmetric" in capsys.readouterr().err

    def test_nonmonotone_grid_rejected(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("x,f_re\n-1.0,1\n0.5,1\n0.0,1\n1.0,1\n")
        code = main(["transform", "--alpha", "0.5", "--input", str(path)])
        assert code == 2
        assert "increasing" in capsys.readouterr().err


class TestSonineCommand:
    def test_dual_gaussian_value(self, capsys):
        code = main(["sonine", "--alpha", "0.5", "--beta", "1.5", "--x", "0", "--dual"])
        out = capsys.readouterr().out
        assert code == 0
        val = float(out.splitlines()[1].split(",")[1])
        assert val == pytest.approx(math.gamma(2.5) / math.gamma(1.5), rel=1e-9)

    def test_bad_pair_exits_2(self, capsys):
        code = main(["sonine", "--alpha", "1.5", "--beta", "0.5", "--x", "0"])
        assert code == 2
        assert "beta > alpha" in capsys.readouterr().err


class TestVerifyCommand:
    def test_single_suite_passes(self, tmp_path, capsys):
        out_path = tmp_path / "rep.json"
        code = main(
            [
                "verify",
                "--alpha", "0.5", "--beta", "1.5",
                "--suites", "sonine-product,sonine-monomial",
                "--out", str(out_path),
            ]
        )
        assert code == 0
        reports = json.loads(out_path.read_text())
        assert all(r["max_rel_err"] <= r["params"]["tol"] for r in reports)
        assert all(r["elapsed_s"] == 0.0 for r in reports)

    def test_unknown_suite_exits_2(self, capsys):
        code = main(["verify", "--suites", "nonsense"])
        assert code == 2
        assert "unknown suite" in capsys.readouterr().err

    def test_beta_not_above_alpha_exits_2(self, capsys):
        code = main(["verify", "--alpha", "1.5", "--beta", "0.5", "--suites", "sonine-product"])
        assert code == 2

    def test_deterministic_outputs(self, tmp_path):
        args = ["verify", "--alpha", "0.5", "--beta", "1.5", "--suites", "kernel-consistency"]
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        assert main([*args, "--out", str(p1)]) == 0
        assert main([*args, "--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_failed_tolerance_exits_1(self, tmp_path, capsys):
        code = main(
            [
                "verify",
                "--alpha", "0.5", "--beta", "1.5",
                "--suites", "sonine-product",
                "--tol", "sonine-product=1e-18",
                "--out", str(tmp_path / "r.json"),
            ]
        )
        assert code == 1

    def test_unknown_tolerance_exits_2(self, capsys):
        code = main(["verify", "--tol", "bogus=1", "--suites", "sonine-product"])
        assert code == 2

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = {
            "alpha": 0.5,
            "beta": 1.5,
            "suites": ["sonine-product"],
            "tolerances": {"sonine-product": 1e-7},
            "output": {"format": "csv"},
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        out_path = tmp_path / "rep.csv"
        code = main(["verify", "--config", str(cfg_path), "--out", str(out_path)])
        assert code == 0
        assert out_path.read_text().startswith("name,params,grid")

    def test_csv_format_flag(self, tmp_path):
        out_path = tmp_path / "rep.csv"
        code = main(
            ["verify", "--alpha", "0.5", "--beta", "1.5", "--suites", "kernel-consistency",
             "--format", "csv", "--out", str(out_path)]
        )
        assert code == 0
        assert out_path.read_text().splitlines()[0] == "name,params,grid,max_abs_err,max_rel_err,elapsed_s"

    def test_threads_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DUNKL_THREADS", "2")
        out_path = tmp_path / "rep.json"
        code = main(
            ["verify", "--alpha", "0.5", "--beta", "1.5",
             "--suites", "kernel-consistency,sonine-product", "--out", str(out_path)]
        )
        assert code == 0
        names = {r["name"] for r in json.loads(out_path.read_text())}
        assert names == {"kernel-consistency", "sonine-product"}


class TestReportCommand:
    def test_empty(self, capsys):
        code = main(["report"])
        assert code == 0
        assert "no reports" in capsys.readouterr().out

    def test_summary_and_merge(self, tmp_path, capsys):
        out1 = tmp_path / "r1.json"
        out2 = tmp_path / "r2.json"
        main(["verify", "--alpha", "0.5", "--beta", "1.5", "--suites", "sonine-product", "--out", str(out1)])
        main(["verify", "--alpha", "0.0", "--beta", "1.0", "--suites", "sonine-product", "--out", str(out2)])
        capsys.readouterr()
        code = main(["report", str(out1), str(out2)])
        out = capsys.readouterr().out
        assert code == 0
        assert "sonine-product" in out
        assert "2" in out.split("sonine-product")[1].split()[0]

    def test_missing_file_exits_2(self, capsys):
        code = main(["report", "no-such-file.json"])
        assert code == 2


class TestEntryPoint:
    def test_module_invocation(self):
        proc = run_cli(["kernel", "--alpha", "0.5", "--z", "0"])
        assert proc.returncode == 0
        assert proc.stdout.startswith("z_re")
