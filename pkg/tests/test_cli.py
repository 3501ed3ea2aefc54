"""Command-line interface: exit codes, exports, round trips."""

import csv
import json

import pytest

from grad_adversary import read_trace_json
from grad_adversary.cli import main


class TestExitCodes:
    def test_list(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        assert "armijo" in out and "staircase" in out

    def test_verify_pass(self, capsys):
        assert main(["verify", "--scenario", "bb", "--steps", "10"]) == 0
        out = capsys.readouterr().out
        assert "PASS  bb:anchor_tracking" in out

    def test_unknown_scenario_usage_error(self, capsys):
        assert main(["verify", "--scenario", "nope"]) == 2

    def test_bad_param_usage_error(self):
        assert main(["run", "--scenario", "bb", "--param", "bogus=1"]) == 2
        assert main(["run", "--scenario", "bb", "--param", "novalue"]) == 2

    def test_infeasible_steps_exit_3(self, capsys):
        assert main(["run", "--scenario", "armijo", "--steps", "20"]) == 3
        err = capsys.readouterr().err
        assert "max feasible step count: 13" in err

    def test_verify_requires_target(self):
        assert main(["verify"]) == 2


class TestRunExports:
    def test_json_round_trip(self, tmp_path, capsys):
        out = tmp_path / "trace.json"
        assert main(["run", "--scenario", "bb", "--steps", "6", "--out", str(out)]) == 0
        trace = read_trace_json(out)
        assert trace.scenario == "bb"
        assert len(trace.iterations) == 7
        assert [float(r.theta[0]) for r in trace.iterations] == [0, 1, 2, 3, 4, 5, 6]

    def test_csv_export(self, tmp_path):
        out = tmp_path / "trace.csv"
        assert main(["run", "--scenario", "armijo", "--steps", "5", "--out", str(out), "--format", "csv"]) == 0
        rows = list(csv.reader(out.open()))
        assert rows[0][0] == "k"
        assert len(rows) == 7
        assert int(rows[-1][4]) == 32  # cumulative objective evals 2^5

    def test_plot_export(self, tmp_path):
        png = tmp_path / "trace.png"
        assert main(["run", "--scenario", "bb", "--steps", "5", "--plot", str(png)]) == 0
        assert png.stat().st_size > 0


class TestAudit:
    def test_audit_json(self, tmp_path, capsys):
        out = tmp_path / "audit.json"
        code = main(
            [
                "audit",
                "--model",
                "gee",
                "--param",
                "y=2",
                "--path",
                "geometric:1,0.01,6",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        data = json.loads(out.read_text())
        assert data["model"] == "gee"
        assert len(data["samples"]) == 6
        # limiting ratio 1/y = 0.5
        assert abs(float(data["samples"][-1]["ratio"]) - 0.5) < 1e-3

    def test_audit_csv(self, tmp_path):
        out = tmp_path / "audit.csv"
        assert main(["audit", "--model", "ffnn", "--path", "linear:10,5,4", "--out", str(out), "--format", "csv"]) == 0
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["t", "theta", "grad_norm", "hess_norm", "ratio"]
        assert len(rows) == 5

    def test_bad_path_spec(self):
        assert main(["audit", "--model", "gee", "--path", "bogus"]) == 2


class TestInterp:
    def test_center_reproduced(self, capsys):
        assert main(["interp", "--halfwidth", "1", "--center", "1,0,0"]) == 0
        out = capsys.readouterr().out
        assert "c_0 = 1.e+00" in out
        assert "P(0) = 1.e+00" in out

    def test_malformed_center(self):
        assert main(["interp", "--halfwidth", "1", "--center", "1,2"]) == 2


class TestVerifyAll:
    def test_all_scenarios_pass(self, capsys):
        assert main(["verify", "--all", "--steps", "8"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 31
        assert "FAIL" not in out
