"""Tests of the command-line interface: schemas, exit codes, config."""

import json
import math

import pytest

from fousldp import cli
from fousldp.energy import rate_energy, tail_energy
from fousldp.model import ModelParams

P = ModelParams(theta=-1.0, hurst=0.75)


def _run(argv):
    return cli.run(argv)


def _rows(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


class TestRateCommand:
    def test_csv_schema_and_values(self, capsys):
        code = _run(
            ["rate", "--theta", "-1", "--hurst", "0.75", "--target", "energy",
             "--c", "0.5", "--c", "1.0"]
        )
        assert code == cli.EXIT_OK
        rows = _rows(capsys.readouterr().out)
        assert [r["c"] for r in rows] == [
            f"{0.5:.17e}", f"{1.0:.17e}"
        ]
        assert float(rows[1]["rate"]) == rate_energy(P, 1.0)
        assert rows[0]["branch"] == "GAUSSIAN"

    def test_missing_c_is_usage_error(self, capsys):
        code = _run(["rate", "--theta", "-1", "--hurst", "0.75", "--target", "energy"])
        assert code == cli.EXIT_USAGE

    def test_mle_target(self, capsys):
        code = _run(
            ["rate", "--theta", "-1", "--hurst", "0.75", "--target", "mle",
             "--c", "-0.5"]
        )
        assert code == cli.EXIT_OK
        rows = _rows(capsys.readouterr().out)
        assert float(rows[0]["rate"]) == pytest.approx(0.125, abs=1e-15)


class TestTailCommand:
    def test_branch_and_value(self, capsys):
        code = _run(
            ["tail", "--theta", "-1", "--hurst", "0.75", "--target", "energy",
             "--T", "40", "--c", "0.7", "--order1"]
        )
        assert code == cli.EXIT_OK
        row = _rows(capsys.readouterr().out)[0]
        assert row["branch"] == "EASY"
        ref = tail_energy(P, 0.7, 40.0, with_order1=True)
        assert float(row["value"]) == ref.value(40.0)
        assert float(row["order1"]) == ref.order1

    def test_invalid_hurst_exit_code(self, capsys):
        code = _run(
            ["tail", "--theta", "-1", "--hurst", "0.3", "--target", "energy",
             "--c", "0.7"]
        )
        assert code == cli.EXIT_INVALID


class TestSaddleCommand:
    def test_columns(self, capsys):
        code = _run(
            ["saddle", "--theta", "-1", "--hurst", "0.75", "--T", "50",
             "--c", "4.0"]
        )
        assert code == cli.EXIT_OK
        row = _rows(capsys.readouterr().out)[0]
        for key in ("a_T", "phi_T", "scale", "a0", "a1", "a2", "expansion"):
            assert key in row
        assert row["scale"] == "1/T"


class TestSimulateCommand:
    def test_reruns_byte_identical(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        for out in (out1, out2):
            code = _run(
                ["simulate", "--theta", "-1", "--hurst", "0.75", "--T", "5",
                 "--grid-n", "200", "--replicates", "16", "--seed", "9",
                 "--out", str(out)]
            )
            assert code == cli.EXIT_OK
        assert out1.read_bytes() == out2.read_bytes()

    def test_dump_paths(self, tmp_path):
        out = tmp_path / "summary.csv"
        code = _run(
            ["simulate", "--theta", "-1", "--hurst", "0.75", "--T", "5",
             "--grid-n", "150", "--replicates", "2", "--seed", "3",
             "--dump-paths", "--out", str(out)]
        )
        assert code == cli.EXIT_OK
        assert out.exists()
        dump = out.parent / "summary.csv_0.csv"
        assert dump.exists()
        rows = _rows(dump.read_text())
        assert list(rows[0].keys()) == ["t", "M", "Y", "Q", "S"]
        assert len(rows) == 151


class TestMcCommand:
    def test_underpowered_row(self, capsys):
        code = _run(
            ["mc", "--theta", "-1", "--hurst", "0.75", "--target", "energy",
             "--T", "40", "--c", "6.0", "--replicates", "10000", "--seed", "1"]
        )
        assert code == cli.EXIT_OK
        row = _rows(capsys.readouterr().out)[0]
        assert row["underpowered"] == "True"
        assert row["z_score"] == ""


class TestCltCommand:
    def test_report_rows(self, capsys):
        code = _run(
            ["clt", "--theta", "-1", "--hurst", "0.75", "--T", "10",
             "--grid-n", "400", "--replicates", "1000", "--seed", "2"]
        )
        assert code == cli.EXIT_OK
        rows = _rows(capsys.readouterr().out)
        assert len(rows) == 2
        assert {"ks_statistic", "crit_1pct", "below_1pct"} <= set(rows[0])


class TestOracleCommand:
    def test_legendre(self, capsys):
        code = _run(
            ["oracle", "--theta", "-1", "--hurst", "0.75", "--kind", "legendre",
             "--target", "energy", "--c", "0.7"]
        )
        assert code == cli.EXIT_OK
        row = _rows(capsys.readouterr().out)[0]
        assert float(row["abs_err"]) < 1e-6

    def test_gamma_contour_needs_no_model(self, capsys):
        code = _run(
            ["oracle", "--kind", "gamma-contour", "--shape", "1.0", "--nu", "0.5",
             "--gamma-freq", "1.0", "--sigma2", "1.0", "--T", "1000", "--p", "2"]
        )
        assert code == cli.EXIT_OK
        row = _rows(capsys.readouterr().out)[0]
        assert float(row["rel_err"]) < 1e-3


class TestExitCodes:
    def test_unknown_subcommand(self, capsys):
        assert _run(["frobnicate"]) == cli.EXIT_USAGE

    def test_unknown_flag(self, capsys):
        assert _run(
            ["rate", "--theta", "-1", "--hurst", "0.75", "--target", "energy",
             "--c", "1.0", "--no-such-flag"]
        ) == cli.EXIT_USAGE

    def test_missing_model_parameters(self, capsys):
        assert _run(["rate", "--target", "energy", "--c", "1.0"]) == cli.EXIT_USAGE

    def test_numerical_failure_maps_to_three(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise ArithmeticError("forced")

        monkeypatch.setattr(cli.energy, "rate_energy", boom)
        code = _run(
            ["rate", "--theta", "-1", "--hurst", "0.75", "--target", "energy",
             "--c", "1.0"]
        )
        assert code == cli.EXIT_NUMERICAL


class TestConfig:
    def test_config_supplies_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"theta": -1.0, "hurst": 0.75}))
        code = _run(
            ["rate", "--config", str(cfg), "--target", "energy", "--c", "1.0"]
        )
        assert code == cli.EXIT_OK
        row = _rows(capsys.readouterr().out)[0]
        assert float(row["rate"]) == rate_energy(P, 1.0)

    def test_explicit_flag_wins(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"theta": -2.0, "hurst": 0.75}))
        code = _run(
            ["rate", "--config", str(cfg), "--theta", "-1", "--target", "energy",
             "--c", "1.0"]
        )
        assert code == cli.EXIT_OK
        row = _rows(capsys.readouterr().out)[0]
        assert float(row["rate"]) == rate_energy(P, 1.0)

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"volatility": 1.0}))
        code = _run(
            ["rate", "--config", str(cfg), "--theta", "-1", "--hurst", "0.75",
             "--target", "energy", "--c", "1.0"]
        )
        assert code == cli.EXIT_USAGE

    def test_threads_flag_accepted(self, capsys):
        code = _run(
            ["rate", "--theta", "-1", "--hurst", "0.75", "--target", "energy",
             "--c", "1.0", "--threads", "2"]
        )
        assert code == cli.EXIT_OK
