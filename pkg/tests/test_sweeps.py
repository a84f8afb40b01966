"""Unit tests for sweep configuration, CSV output, and the CLI."""

import json

import numpy as np
import pytest

from dwcavity import ConfigError
from dwcavity.cli import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    main,
)
from dwcavity.sweeps import (
    SweepConfig,
    rows_to_csv,
    run_quasi,
    run_spectrum,
    run_steady,
    run_trace,
    run_validate,
    steady_header,
    trace_header,
    validate_config_schema,
)

SMALL = {
    "params": {"N": 2, "t_hz": 400.0, "u_hz": 200.0, "kappa_hz": 1.5e6,
               "U0_hz": 6.0e6, "eta_hz": 1.0e5},
    "truncation": {"fock_cutoff": 4, "tail_tolerance": 1e-6},
    "delta": {"min": -0.5, "max": 2.5, "steps": 5, "units": "U0"},
    "cut_times": [1.0, 3.0],
}


def small_config(mode, **extra):
    raw = json.loads(json.dumps(SMALL))
    raw["mode"] = mode
    raw.update(extra)
    return SweepConfig.from_dict(raw)


class TestConfig:
    def test_defaults_resolve(self):
        cfg = SweepConfig.from_dict({})
        assert cfg.mode == "trace"
        assert cfg.params.U0 == pytest.approx(4.0)
        assert cfg.delta_grid.size == 81
        assert cfg.delta_over_U0[0] == -1.0 and cfg.delta_over_U0[-1] == 3.0

    def test_kappa_units_grid(self):
        cfg = SweepConfig.from_dict(
            {"delta": {"min": -2.0, "max": 2.0, "steps": 3, "units": "kappa"}})
        assert np.allclose(cfg.delta_grid, [-2.0, 0.0, 2.0])
        assert np.allclose(cfg.delta_over_U0, cfg.delta_grid / 4.0)

    def test_eta_scale_multiplies_baseline(self):
        cfg = SweepConfig.from_dict({"eta_scale": [1.0, 7.5, 15.0]})
        assert np.allclose(cfg.eta_list, [1 / 15, 0.5, 1.0])

    @pytest.mark.parametrize("raw", [
        {"mode": "bogus"},
        {"unknown_key": 1},
        {"params": {"unknown": 2}},
        {"delta": {"units": "Hz"}},
        {"delta": {"steps": 0}},
        {"cut_times": [5.0, 2.0]},
        {"cut_times": []},
        {"eta_scale": []},
        {"jobs": 0},
        {"params": {"kappa_hz": 0.0}},
        {"truncation": {"fock_cutoff": 0}},
    ])
    def test_invalid_config_rejected(self, raw):
        with pytest.raises(ConfigError):
            SweepConfig.from_dict(raw)

    def test_schema_validation(self):
        validate_config_schema(SMALL)
        with pytest.raises(ConfigError):
            validate_config_schema({"params": {"t_hz": -1.0}})
        with pytest.raises(ConfigError):
            validate_config_schema({"mode": 3})

    def test_from_json_rejects_invalid_document(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            SweepConfig.from_json(path)


class TestCsv:
    def test_float_formatting_is_locale_free(self):
        text = rows_to_csv(["a", "b", "c"], [{"a": 0.1, "b": True, "c": "x"}])
        assert text == "a,b,c\n0.1,1,x\n"

    def test_missing_columns_left_empty(self):
        text = rows_to_csv(["a", "b"], [{"a": 1.0}])
        assert text.splitlines()[1] == "1,"


class TestRunners:
    def test_quasi_rows_match_grid(self):
        cfg = small_config("quasi")
        header, rows = run_quasi(cfg)
        assert len(rows) == 5
        assert all(set(header) >= set(r) for r in rows)
        peak = max(rows, key=lambda r: r["photon_norm_quasi"])
        assert peak["delta_over_U0"] == pytest.approx(1.0)

    def test_trace_columns_and_consistency(self):
        cfg = small_config("trace",
                           delta={"min": 0.0, "max": 0.0, "steps": 1,
                                  "units": "U0"})
        header, rows = run_trace(cfg)
        assert header == trace_header(2)
        assert [r["kappa_tau"] for r in rows] == [1.0, 3.0]
        for row in rows:
            assert row["error"] == ""
            total = sum(row[f"pop{m}"] for m in range(3))
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_steady_against_quasi_at_weak_pump(self):
        cfg = small_config("steady",
                           delta={"min": 1.0, "max": 1.0, "steps": 1,
                                  "units": "U0"})
        header, rows = run_steady(cfg)
        assert header == steady_header(2)
        row = rows[0]
        assert row["error"] == ""
        assert not row["degenerate"]
        assert row["photon_norm_steady"] == pytest.approx(
            row["photon_norm_from_pops"], rel=0.01)
        assert row["stationarity_residual"] < 1e-8

    def test_steady_truncation_breach_recorded_per_point(self):
        cfg = small_config(
            "steady",
            truncation={"fock_cutoff": 1, "tail_tolerance": 1e-8},
            eta_scale=[15.0],
            delta={"min": 0.0, "max": 0.0, "steps": 1, "units": "U0"},
        )
        _, rows = run_steady(cfg)
        assert rows[0]["error"] == "TruncationBreachError"

    def test_spectrum_rows(self):
        cfg = small_config("spectrum",
                           delta={"min": 0.0, "max": 1.0, "steps": 2,
                                  "units": "U0"})
        _, rows = run_spectrum(cfg)
        for row in rows:
            assert row["error"] == ""
            assert row["zero_count"] == 1
            assert row["kappa_tau_max"] > 1.0
            assert row["tau_max_seconds"] == pytest.approx(
                row["kappa_tau_max"] / cfg.params.kappa_ref)

    def test_validate_passes_at_reference_point(self):
        cfg = small_config("validate")
        report, ok = run_validate(cfg)
        assert ok, [c for c in report["checks"] if not c["passed"]]

    def test_validate_flags_degenerate_generator(self):
        cfg = small_config("validate")
        raw = json.loads(json.dumps(SMALL))
        raw["mode"] = "validate"
        raw["params"]["eta_hz"] = 0.0
        raw["params"]["U0_hz"] = 0.0
        cfg = SweepConfig.from_dict(raw)
        report, ok = run_validate(cfg)
        assert not ok
        failed = {c["name"] for c in report["checks"] if not c["passed"]}
        assert "steady_state" in failed


class TestDeterminism:
    def test_csv_bytes_reproducible(self):
        cfg = small_config("quasi")
        a = rows_to_csv(*run_quasi(cfg))
        b = rows_to_csv(*run_quasi(cfg))
        assert a == b

    def test_worker_count_does_not_change_output(self):
        serial = small_config("steady", jobs=1)
        parallel = small_config("steady", jobs=4)
        a = rows_to_csv(*run_steady(serial))
        b = rows_to_csv(*run_steady(parallel))
        assert a == b


class TestCli:
    def run(self, *argv):
        return main(list(argv))

    def test_quasi_writes_csv(self, tmp_path):
        out = tmp_path / "quasi.csv"
        code = self.run("quasi", "--delta-min", "-1", "--delta-max", "3",
                        "--delta-steps", "9", "--out", str(out))
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith("delta_over_U0,")
        assert len(lines) == 10

    def test_flags_override_config_file(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(
            {"delta": {"min": 0.0, "max": 1.0, "steps": 3}}))
        out = tmp_path / "q.csv"
        code = self.run("quasi", "--config", str(cfg_path),
                        "--delta-steps", "5", "--out", str(out))
        assert code == EXIT_OK
        assert len(out.read_text().splitlines()) == 6

    def test_unknown_config_key_is_config_error(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"bogus": 1}))
        assert self.run("quasi", "--config", str(cfg_path)) == EXIT_CONFIG

    def test_missing_config_file_is_config_error(self):
        assert self.run("quasi", "--config", "/nonexistent.json") == EXIT_CONFIG

    def test_validate_reference_point_passes(self, tmp_path):
        out = tmp_path / "report.json"
        code = self.run("validate", "--fock-cutoff", "4", "--out", str(out))
        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report["all_passed"] is True

    def test_validate_forced_failure_exits_one(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(
            {"params": {"eta_hz": 0.0, "U0_hz": 0.0},
             "truncation": {"fock_cutoff": 4}}))
        assert self.run("validate", "--config", str(cfg_path)) == EXIT_VALIDATION

    def test_oversized_spectrum_is_numerical_error(self):
        assert self.run("spectrum", "--fock-cutoff", "40",
                        "--delta-steps", "2") == EXIT_NUMERICAL

    def test_eta_flag_replaces_scaled_list(self, tmp_path):
        out = tmp_path / "s.csv"
        code = self.run("steady", "--fock-cutoff", "4",
                        "--delta-min", "0", "--delta-max", "0",
                        "--delta-steps", "1", "--eta", "0.05", "--eta", "0.1",
                        "--out", str(out))
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        header = lines[0].split(",")
        idx = header.index("eta_kappa")
        etas = [float(line.split(",")[idx]) for line in lines[1:]]
        assert etas == [0.05, 0.1]
