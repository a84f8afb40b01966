"""Command-line experiment runner.

Subcommands: trace, quasi, steady, spectrum, validate.  A JSON config sets
the baseline (defaults reproduce the reference parameter set); individual
flags override config fields.  Exit codes: 0 success, 1 validation failure,
2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ConfigError, DwCavityError
from .sweeps import (
    SweepConfig,
    validate_config_schema,
    rows_to_csv,
    run_quasi,
    run_spectrum,
    run_steady,
    run_trace,
    run_validate,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwcavity",
        description="Double-well cavity QED sweeps: photon spectra, "
        "steady states, Liouvillian timescales.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode, desc in [
        ("trace", "time-cut photon spectra and coherence decay (CSV)"),
        ("quasi", "closed-form quasi-steady / weak-pump spectra (CSV)"),
        ("steady", "steady-state observables on a (delta, eta) grid (CSV)"),
        ("spectrum", "relaxation timescale tau_max vs detuning (CSV)"),
        ("validate", "run the invariant suite; JSON report"),
    ]:
        p = sub.add_parser(mode, help=desc)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--delta-min", type=float, help="grid start (units of U0)")
        p.add_argument("--delta-max", type=float, help="grid end (units of U0)")
        p.add_argument("--delta-steps", type=int, help="grid point count")
        p.add_argument(
            "--eta", type=float, action="append",
            help="pump amplitude in kappa units (repeatable)",
        )
        p.add_argument("--fock-cutoff", type=int, help="Fock truncation n_c")
        p.add_argument("--jobs", type=int, help="concurrent grid workers")
    return parser


def resolve_config(args) -> SweepConfig:
    raw = {}
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
    raw["mode"] = args.mode
    delta = dict(raw.get("delta", {}))
    if args.delta_min is not None:
        delta["min"] = args.delta_min
    if args.delta_max is not None:
        delta["max"] = args.delta_max
    if args.delta_steps is not None:
        delta["steps"] = args.delta_steps
    if delta:
        raw["delta"] = delta
    if args.fock_cutoff is not None:
        trunc = dict(raw.get("truncation", {}))
        trunc["fock_cutoff"] = args.fock_cutoff
        raw["truncation"] = trunc
    if args.jobs is not None:
        raw["jobs"] = args.jobs
    validate_config_schema(raw)
    cfg = SweepConfig.from_dict(raw)
    if args.eta:
        # --eta values are absolute (kappa units), replacing the scaled list
        cfg = SweepConfig(
            mode=cfg.mode, params=cfg.params, truncation=cfg.truncation,
            delta_grid=cfg.delta_grid, delta_over_U0=cfg.delta_over_U0,
            eta_list=np.asarray(args.eta, dtype=float),
            cut_times=cfg.cut_times, jobs=cfg.jobs,
        )
    return cfg


def _write(text: str, out_path):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if cfg.mode == "validate":
            report, all_passed = run_validate(cfg)
            for check in report["checks"]:
                status = "PASS" if check["passed"] else "FAIL"
                print(f"[{status}] {check['name']}: {check['detail']}",
                      file=sys.stderr)
            _write(json.dumps(report, indent=2) + "\n", args.out)
            return EXIT_OK if all_passed else EXIT_VALIDATION
        runner = {
            "trace": run_trace,
            "quasi": run_quasi,
            "steady": run_steady,
            "spectrum": run_spectrum,
        }[cfg.mode]
        header, rows = runner(cfg)
        _write(rows_to_csv(header, rows), args.out)
        return EXIT_OK
    except DwCavityError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
