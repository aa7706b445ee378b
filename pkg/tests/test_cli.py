import json

import numpy as np
import pytest

from qcwave.cli import (
    ENV_OUTPUT_DIR,
    EXIT_OK,
    EXIT_TOLERANCE,
    EXIT_USAGE,
    UsageError,
    main,
    parse_config,
    read_series_csv,
)

FAST = [
    "--n-samples", "50", "--dt", "2e-3", "--t-max", "1.0",
    "--out-stride", "100", "--seed", "5",
]


class TestParseConfig:
    def test_defaults(self):
        cfg = parse_config(["simulate"])
        p = cfg.run.params
        assert p.omega == pytest.approx(1 / 3)
        assert p.beta == 0.3
        assert p.omega_max == 3.0
        assert p.xi_k == 0.007
        assert p.n_osc == 200
        assert cfg.run.n_samples == 10_000
        assert cfg.run.dt == 1e-3
        assert cfg.run.t_max == 20.0
        assert cfg.run.integrator == "rk4"
        assert cfg.run.mode == "nonadiabatic"
        assert cfg.fmt == "csv"

    def test_flag_overrides(self):
        cfg = parse_config(["simulate", "--mode", "adiabatic", "--beta", "0.5"])
        assert cfg.run.mode == "adiabatic"
        assert cfg.run.params.beta == 0.5
        # untouched defaults survive
        assert cfg.run.params.omega == pytest.approx(1 / 3)

    def test_invalid_value_names_field(self):
        with pytest.raises(UsageError, match="n_samples"):
            parse_config(["simulate", "--n-samples", "-5"])

    def test_unknown_subcommand(self):
        with pytest.raises(UsageError):
            parse_config(["simulte"])

    def test_converge_tolerance_flags(self):
        cfg = parse_config(["converge", "--dt-tol", "0.01", "--m-tol", "0.1"])
        assert cfg.dt_tol == 0.01
        assert cfg.m_tol == 0.1

    def test_config_file(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text(
            "# relaxation run\n"
            "beta = 0.4\n"
            "n_samples = 77   # small\n"
            "mode = adiabatic\n"
            "\n"
        )
        cfg = parse_config(["simulate", "--config", str(f)])
        assert cfg.run.params.beta == 0.4
        assert cfg.run.n_samples == 77
        assert cfg.run.mode == "adiabatic"

    def test_flags_beat_config_file(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("beta = 0.4\nn_samples = 77\n")
        cfg = parse_config(["simulate", "--config", str(f), "--beta", "0.9"])
        assert cfg.run.params.beta == 0.9
        assert cfg.run.n_samples == 77

    def test_config_file_unknown_key(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("betta = 0.4\n")
        with pytest.raises(UsageError, match="unknown key"):
            parse_config(["simulate", "--config", str(f)])

    def test_config_file_malformed_value(self, tmp_path):
        f = tmp_path / "run.cfg"
        f.write_text("beta = warm\n")
        with pytest.raises(UsageError, match="run.cfg:1"):
            parse_config(["simulate", "--config", str(f)])

    def test_config_file_missing(self):
        with pytest.raises(UsageError, match="cannot read"):
            parse_config(["simulate", "--config", "/nonexistent/x.cfg"])

    def test_env_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv(ENV_OUTPUT_DIR, str(tmp_path))
        cfg = parse_config(["simulate"])
        assert cfg.output.parent == tmp_path


class TestSimulate:
    def test_csv_round_trip(self, tmp_path):
        out = tmp_path / "run.csv"
        rc = main(["simulate", *FAST, "--output", str(out)])
        assert rc == EXIT_OK
        times, mean, stderr = read_series_csv(out)
        assert times[0] == 0.0 and times[-1] == pytest.approx(1.0)
        assert mean[0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(stderr >= 0)
        # header echoes the effective configuration
        header = out.read_text().splitlines()
        assert any(line.startswith("# master_seed = 5") for line in header)
        assert "t,sigma_z,stderr" in header

    def test_reruns_byte_identical(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        main(["simulate", *FAST, "--output", str(a)])
        main(["simulate", *FAST, "--output", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_t_max_zero_single_row(self, tmp_path):
        out = tmp_path / "zero.csv"
        rc = main([
            "simulate", "--n-samples", "20", "--t-max", "0", "--seed", "5",
            "--output", str(out),
        ])
        assert rc == EXIT_OK
        times, mean, _ = read_series_csv(out)
        assert times.shape == (1,)
        assert mean[0] == pytest.approx(1.0, abs=1e-12)

    def test_jsonl_output(self, tmp_path):
        out = tmp_path / "run.jsonl"
        rc = main(["simulate", *FAST, "--format", "jsonl", "--output", str(out)])
        assert rc == EXIT_OK
        lines = [json.loads(s) for s in out.read_text().splitlines()]
        assert "config" in lines[0]
        assert lines[0]["config"]["master_seed"] == 5
        assert lines[1]["t"] == 0.0
        assert lines[1]["sigma_z"] == pytest.approx(1.0, abs=1e-12)
        assert all(set(rec) == {"t", "sigma_z", "stderr"} for rec in lines[1:])

    def test_usage_error_exit_code(self, capsys):
        rc = main(["simulate", "--n-samples", "-5"])
        assert rc == EXIT_USAGE
        assert "n_samples" in capsys.readouterr().err

    def test_runtime_error_exit_code(self, tmp_path):
        rc = main(["simulate", *FAST, "--output", str(tmp_path / "no" / "dir.csv")])
        assert rc == 1


class TestConverge:
    def test_pass_and_report(self, tmp_path, capsys):
        rc = main([
            "converge", "--n-samples", "50", "--dt", "2e-3", "--t-max", "0.5",
            "--out-stride", "50", "--seed", "5", "--output", str(tmp_path / "c.csv"),
        ])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert out.count("PASS") == 2

    def test_tolerance_failure_exit_code(self, tmp_path, capsys):
        rc = main([
            "converge", "--n-samples", "50", "--dt", "2e-3", "--t-max", "0.5",
            "--out-stride", "50", "--seed", "5", "--m-tol", "0",
            "--output", str(tmp_path / "c.csv"),
        ])
        assert rc == EXIT_TOLERANCE
        assert "FAIL" in capsys.readouterr().out


class TestBracketDemo:
    def test_runs_and_reports(self, capsys):
        rc = main(["bracket-demo"])
        out = capsys.readouterr().out
        assert rc == EXIT_OK
        assert "Jacobi defect" in out
        assert "Rabi check" in out
        assert "H drift" in out
