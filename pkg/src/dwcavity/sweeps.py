"""Parameter-sweep experiment runner with deterministic CSV output.

Grids are embarrassingly parallel; rows are always emitted in grid order so
the CSV bytes do not depend on the worker count.  All dimensionless columns
are in kappa units; the kappa_ref column recovers SI units.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic
from .dimer import ground_state, initial_state
from .errors import (
    ConfigError,
    DegenerateSteadyStateError,
    DimensionMismatchError,
    DwCavityError,
    EigensolverError,
    TruncationBreachError,
)
from .liouville import build_liouvillian, spectrum, steady_state, vec
from .model import HilbertSpace, ModelParams, TruncationConfig, build_hamiltonian
from .propagate import (
    atomic_rdm,
    evolve_expm,
    observables,
    photon_number,
    top_fock_population,
)

MODES = ("trace", "quasi", "steady", "spectrum", "validate")


def validate_config_schema(raw: dict) -> None:
    """Check a raw config dict against the shipped JSON schema."""
    import jsonschema
    from importlib.resources import files

    schema = json.loads(
        files("dwcavity.data").joinpath("sweep_config.schema.json").read_text()
    )
    try:
        jsonschema.validate(raw, schema)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config schema violation: {exc.message}") from exc

DEFAULT_CONFIG = {
    "mode": "trace",
    "params": {
        "N": 2,
        "t_hz": 400.0,
        "u_hz": 200.0,
        "kappa_hz": 1.5e6,
        "U0_hz": 6.0e6,
        "eta_hz": 1.0e5,
    },
    "truncation": {"fock_cutoff": 8, "tail_tolerance": 1e-8},
    "delta": {"min": -1.0, "max": 3.0, "steps": 81, "units": "U0"},
    "eta_scale": [1.0],
    "cut_times": [2.0, 5.0, 20.0, 200.0],
    "jobs": 1,
}


@dataclass(frozen=True)
class SweepConfig:
    """A fully resolved sweep: baseline parameters plus grids."""

    mode: str
    params: ModelParams
    truncation: TruncationConfig
    delta_grid: np.ndarray  # in kappa units
    delta_over_U0: np.ndarray
    eta_list: np.ndarray  # in kappa units
    cut_times: np.ndarray  # kappa*tau
    jobs: int = 1

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepConfig":
        cfg = json.loads(json.dumps(DEFAULT_CONFIG))  # deep copy
        for key, val in raw.items():
            if key not in cfg:
                raise ConfigError(f"unknown config key: {key!r}")
            if isinstance(cfg[key], dict):
                unknown = set(val) - set(cfg[key])
                if unknown:
                    raise ConfigError(f"unknown keys in {key!r}: {sorted(unknown)}")
                cfg[key].update(val)
            else:
                cfg[key] = val

        if cfg["mode"] not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {cfg['mode']!r}")
        try:
            p = cfg["params"]
            params = ModelParams.from_two_pi_hz(
                N=p["N"], t_hz=p["t_hz"], u_hz=p["u_hz"], kappa_hz=p["kappa_hz"],
                U0_hz=p["U0_hz"], eta_hz=p["eta_hz"], delta_hz=0.0,
            )
            truncation = TruncationConfig(**cfg["truncation"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"invalid parameters: {exc}") from exc

        d = cfg["delta"]
        if d["steps"] < 1 or not all(
            math.isfinite(x) for x in (d["min"], d["max"])
        ):
            raise ConfigError(f"invalid delta grid: {d}")
        grid = np.linspace(d["min"], d["max"], int(d["steps"]))
        if d["units"] == "U0":
            delta_grid = grid * params.U0
            delta_over_U0 = grid
        elif d["units"] == "kappa":
            delta_grid = grid
            delta_over_U0 = grid / params.U0 if params.U0 else np.full_like(grid, np.nan)
        else:
            raise ConfigError(f"delta units must be 'U0' or 'kappa', got {d['units']!r}")

        eta_list = np.asarray(
            [params.eta * s for s in cfg["eta_scale"]], dtype=float
        )
        cut_times = np.asarray(cfg["cut_times"], dtype=float)
        if eta_list.size == 0 or cut_times.size == 0:
            raise ConfigError("eta_scale and cut_times must be nonempty")
        if not (np.all(np.isfinite(eta_list)) and np.all(np.isfinite(cut_times))):
            raise ConfigError("grids must contain finite values only")
        if np.any(np.diff(cut_times) <= 0) or cut_times[0] < 0:
            raise ConfigError("cut_times must be non-negative and ascending")
        jobs = int(cfg["jobs"])
        if jobs < 1:
            raise ConfigError("jobs must be >= 1")
        return cls(
            mode=cfg["mode"], params=params, truncation=truncation,
            delta_grid=delta_grid, delta_over_U0=delta_over_U0,
            eta_list=eta_list, cut_times=cut_times, jobs=jobs,
        )

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        with open(path) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
        validate_config_schema(raw)
        return cls.from_dict(raw)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def rows_to_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col, "")) for col in header))
    return "\n".join(lines) + "\n"


def _grid_map(fn, items, jobs):
    if jobs <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _coh_columns(N):
    pairs = [(m, n) for m in range(N + 1) for n in range(m + 1, N + 1)]
    cols = []
    for m, n in pairs:
        cols += [f"coh{m}{n}_re", f"coh{m}{n}_im", f"coh{m}{n}_abs"]
    return pairs, cols


def trace_header(N):
    _, coh_cols = _coh_columns(N)
    return (
        ["delta_over_U0", "delta_kappa", "eta_kappa", "kappa_tau",
         "photon_norm_full", "photon_norm_frozen", "photon_norm_quasi"]
        + [f"pop{m}" for m in range(N + 1)]
        + coh_cols
        + ["coh01_abs_frozen", "coh01_env_analytic",
           "purity_atomic", "top_fock_pop", "kappa_ref", "error"]
    )


def run_trace(config: SweepConfig):
    """Time-cut photon spectra and coherence decay (the short-time picture).

    For each detuning the master equation is propagated twice, with and
    without tunneling, and sampled at the configured cut times.
    """
    p0 = config.params
    space = HilbertSpace(p0.N, config.truncation.fock_cutoff)
    gs = ground_state(p0.N, p0.t, p0.u)
    rho0 = initial_state(gs, space)
    pairs, _ = _coh_columns(p0.N)
    eta = config.eta_list[0]
    norm = eta**2 if eta > 0 else 1.0

    def point(idx):
        delta = config.delta_grid[idx]
        p = p0.replace(delta=delta, eta=eta)
        base = {
            "delta_over_U0": config.delta_over_U0[idx],
            "delta_kappa": delta,
            "eta_kappa": eta,
            "kappa_ref": p0.kappa_ref,
            "error": "",
        }
        try:
            _, _, H = build_hamiltonian(p, space)
            L = build_liouvillian(H, 1.0, space)
            _, _, H_frozen = build_hamiltonian(p.replace(t=0.0), space)
            L_frozen = build_liouvillian(H_frozen, 1.0, space)
            full = evolve_expm(rho0, L, config.cut_times, config.truncation)
            frozen = evolve_expm(rho0, L_frozen, config.cut_times, config.truncation)
        except (TruncationBreachError, DwCavityError) as exc:
            row = dict(base)
            row["error"] = type(exc).__name__
            return [row]

        quasi = analytic.quasi_steady_photon(gs.weights, p) / norm
        if p.N >= 1:
            tau01 = analytic.decoherence_time(0, 1, p).tau_mn
            coh0 = gs.amplitudes[0] * gs.amplitudes[1]
        rows = []
        for (tau, rho), (_, rho_f) in zip(full, frozen):
            rec = observables(rho, space, tau)
            rec_f = observables(rho_f, space, tau)
            row = dict(base)
            row.update({
                "kappa_tau": tau,
                "photon_norm_full": rec.photon_number / norm,
                "photon_norm_frozen": rec_f.photon_number / norm,
                "photon_norm_quasi": quasi,
                "purity_atomic": rec.purity_atomic,
                "top_fock_pop": rec.top_fock_population,
            })
            for m in range(p.N + 1):
                row[f"pop{m}"] = float(rec.atom_populations[m])
            for m, n in pairs:
                c = rec.coherences[(m, n)]
                row[f"coh{m}{n}_re"] = c.real
                row[f"coh{m}{n}_im"] = c.imag
                row[f"coh{m}{n}_abs"] = abs(c)
            if p.N >= 1:
                row["coh01_abs_frozen"] = abs(rec_f.coherences[(0, 1)])
                row["coh01_env_analytic"] = coh0 * math.exp(-tau / tau01)
            rows.append(row)
        return rows

    nested = _grid_map(point, range(config.delta_grid.size), config.jobs)
    rows = [row for sub in nested for row in sub]
    return trace_header(p0.N), rows


def quasi_header(N):
    return ["delta_over_U0", "delta_kappa", "eta_kappa",
            "photon_norm_quasi", "photon_norm_weak", "kappa_ref"]


def run_quasi(config: SweepConfig):
    """Closed-form quasi-steady and weak-pump spectra (no integration)."""
    p0 = config.params
    gs = ground_state(p0.N, p0.t, p0.u)
    uniform = np.full(p0.N + 1, 1.0 / (p0.N + 1))
    eta = config.eta_list[0]
    norm = eta**2 if eta > 0 else 1.0
    rows = []
    for idx in range(config.delta_grid.size):
        p = p0.replace(delta=config.delta_grid[idx], eta=eta)
        rows.append({
            "delta_over_U0": config.delta_over_U0[idx],
            "delta_kappa": p.delta,
            "eta_kappa": eta,
            "photon_norm_quasi": analytic.quasi_steady_photon(gs.weights, p) / norm,
            "photon_norm_weak": analytic.quasi_steady_photon(uniform, p) / norm,
            "kappa_ref": p0.kappa_ref,
        })
    return quasi_header(p0.N), rows


def steady_header(N):
    pairs, _ = _coh_columns(N)
    return (
        ["delta_over_U0", "delta_kappa", "eta_kappa",
         "photon_norm_steady", "photon_norm_from_pops", "photon_norm_quasi",
         "photon_norm_weak"]
        + [f"pop{m}" for m in range(N + 1)]
        + [f"coh{m}{n}_abs" for m, n in pairs]
        + ["stationarity_residual", "degenerate", "top_fock_pop", "kappa_ref", "error"]
    )


def stationarity_residual(rho, space: HilbertSpace, eta: float) -> float:
    """|i eta (<a> - <a^dag>) - 2 kappa <a^dag a>| on a steady state.

    Exact stationarity identity; the magnitude measures the solve quality.
    """
    a_f = np.diag(np.sqrt(np.arange(1, space.field_dim, dtype=float)), k=1)
    a = space.embed_field(a_f)
    ev_a = np.trace(a @ rho)
    ev_n = np.real(np.trace(a_f.conj().T @ a_f @ _field_block(rho, space)))
    return abs(1j * eta * (ev_a - np.conj(ev_a)) - 2.0 * ev_n)


def _field_block(rho, space):
    d_a, d_f = space.atom_dim, space.field_dim
    return np.einsum("mjml->jl", rho.reshape(d_a, d_f, d_a, d_f))


def run_steady(config: SweepConfig):
    """True steady-state observables on the (delta, eta) grid."""
    p0 = config.params
    space = HilbertSpace(p0.N, config.truncation.fock_cutoff)
    gs = ground_state(p0.N, p0.t, p0.u)
    uniform = np.full(p0.N + 1, 1.0 / (p0.N + 1))
    pairs, _ = _coh_columns(p0.N)
    points = [(i, eta) for eta in config.eta_list
              for i in range(config.delta_grid.size)]

    def point(item):
        idx, eta = item
        delta = config.delta_grid[idx]
        p = p0.replace(delta=delta, eta=eta)
        norm = eta**2 if eta > 0 else 1.0
        row = {
            "delta_over_U0": config.delta_over_U0[idx],
            "delta_kappa": delta,
            "eta_kappa": eta,
            "photon_norm_quasi": analytic.quasi_steady_photon(gs.weights, p) / norm,
            "photon_norm_weak": analytic.quasi_steady_photon(uniform, p) / norm,
            "kappa_ref": p0.kappa_ref,
            "degenerate": False,
            "error": "",
        }
        try:
            _, _, H = build_hamiltonian(p, space)
            L = build_liouvillian(H, 1.0, space)
            try:
                rho = steady_state(L)
            except DegenerateSteadyStateError:
                row["degenerate"] = True
                row["error"] = "DegenerateSteadyState"
                return row
            tail = top_fock_population(rho, space)
            if tail > config.truncation.tail_tolerance:
                raise TruncationBreachError(
                    f"steady-state tail {tail:.2e} beyond tolerance"
                )
        except DwCavityError as exc:
            row["error"] = type(exc).__name__
            return row

        rdm = atomic_rdm(rho, space)
        pops = np.real(np.diag(rdm))
        a_f = np.diag(np.sqrt(np.arange(1, space.field_dim, dtype=float)), k=1)
        n_op = space.embed_field(a_f.conj().T @ a_f)
        n_st = photon_number(rho, n_op)
        row.update({
            "photon_norm_steady": n_st / norm,
            "photon_norm_from_pops": analytic.steady_photon_from_populations(
                pops / pops.sum(), p) / norm,
            "stationarity_residual": stationarity_residual(rho, space, eta),
            "top_fock_pop": tail,
        })
        for m in range(p.N + 1):
            row[f"pop{m}"] = float(pops[m])
        for m, n in pairs:
            row[f"coh{m}{n}_abs"] = abs(rdm[m, n])
        return row

    rows = _grid_map(point, points, config.jobs)
    return steady_header(p0.N), rows


def spectrum_header(N):
    return ["delta_over_U0", "delta_kappa", "eta_kappa",
            "kappa_tau_max", "tau_max_seconds", "zero_count",
            "min_decay_rate", "diverging", "kappa_ref", "error"]


def run_spectrum(config: SweepConfig):
    """Liouvillian relaxation timescale tau_max across the detuning grid."""
    p0 = config.params
    space = HilbertSpace(p0.N, config.truncation.fock_cutoff)
    if space.dim**2 > 4096:
        # Same cap for every grid point, so fail the whole run up front.
        raise DimensionMismatchError(
            f"dense spectrum limited to Hilbert dimension 64, got {space.dim}; "
            "reduce the Fock cutoff"
        )
    eta = config.eta_list[0]

    def point(idx):
        delta = config.delta_grid[idx]
        p = p0.replace(delta=delta, eta=eta)
        row = {
            "delta_over_U0": config.delta_over_U0[idx],
            "delta_kappa": delta,
            "eta_kappa": eta,
            "kappa_ref": p0.kappa_ref,
            "error": "",
        }
        try:
            _, _, H = build_hamiltonian(p, space)
            L = build_liouvillian(H, 1.0, space)
            sr = spectrum(L)
        except (EigensolverError, DwCavityError) as exc:
            row["error"] = type(exc).__name__
            return row
        row.update({
            "kappa_tau_max": sr.tau_max,
            "tau_max_seconds": sr.tau_max / p0.kappa_ref,
            "zero_count": sr.zero_count,
            "min_decay_rate": 1.0 / sr.tau_max if sr.tau_max > 0 else np.inf,
            "diverging": sr.diverging,
        })
        return row

    rows = _grid_map(point, range(config.delta_grid.size), config.jobs)
    return spectrum_header(p0.N), rows


def run_validate(config: SweepConfig):
    """Cross-module invariant suite at the configured parameter point.

    Returns (report, all_passed); the report is JSON-serializable with one
    entry per check.
    """
    checks = []

    def record(name, passed, detail=""):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    p = config.params.replace(delta=config.delta_grid[len(config.delta_grid) // 2],
                              eta=config.eta_list[0])
    space = HilbertSpace(p.N, config.truncation.fock_cutoff)
    from .model import build_atom_ops, build_field_ops, build_schwinger

    a, adag = build_field_ops(space)
    n1, n2, hop = build_atom_ops(space)
    Sx, Sy, Sz = build_schwinger(space)
    Ht, Hnon, H = build_hamiltonian(p, space)

    herm = max(np.abs(M.matrix - M.matrix.conj().T).max()
               for M in (H, Ht, Hnon, Sx, Sy, Sz))
    record("hermiticity", herm < 1e-12, f"max defect {herm:.2e}")

    ntot = n1.matrix + n2.matrix
    comm = np.abs(H.matrix @ ntot - ntot @ H.matrix).max()
    record("atom_number_conserved", comm == 0.0, f"[H, n1+n2] max {comm:.2e}")

    nc = space.fock_cutoff
    top = np.zeros((space.field_dim, space.field_dim))
    top[nc, nc] = 1.0
    ident = space.embed_field(np.eye(space.field_dim) - (nc + 1) * top)
    tdef = np.abs(a.matrix @ adag.matrix - adag.matrix @ a.matrix - ident).max()
    record("truncation_identity", tdef < 1e-12, f"defect {tdef:.2e}")

    N = p.N
    dicke = (
        (p.U0 * N / 2 - p.delta) * (adag.matrix @ a.matrix)
        + (p.U0 / 2) * (2 * adag.matrix @ a.matrix + np.eye(space.dim)) @ Sz.matrix
        + p.eta * (a.matrix + adag.matrix)
        + p.u * (Sz.matrix @ Sz.matrix + (N**2 / 4 - N / 2) * np.eye(space.dim))
        - (p.U0 / 2) * Sz.matrix
    )
    ddef = np.abs(Hnon.matrix - dicke).max()
    record("dispersive_dicke_form", ddef < 1e-12, f"defect {ddef:.2e}")

    L = build_liouvillian(H, 1.0, space)
    rng = np.random.default_rng(20260826)
    X = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(
        size=(space.dim, space.dim))
    rho_rand = X @ X.conj().T
    rho_rand /= np.trace(rho_rand).real
    tr_out = abs(np.trace((L.matrix @ vec(rho_rand)).reshape(
        space.dim, space.dim, order="F")))
    record("liouvillian_trace_preserving", tr_out < 1e-10, f"|tr L rho| {tr_out:.2e}")

    direct = L.apply(rho_rand)
    vform = (L.matrix @ vec(rho_rand)).reshape(space.dim, space.dim, order="F")
    vdef = np.abs(direct - vform).max()
    record("vectorization_consistent", vdef < 1e-12, f"defect {vdef:.2e}")

    try:
        gs = ground_state(p.N, p.t, p.u)
        sym = np.abs(gs.amplitudes - gs.amplitudes[::-1]).max()
        record("ground_state_mirror_symmetry", sym < 1e-10, f"asymmetry {sym:.2e}")
    except (DwCavityError, ValueError) as exc:
        record("ground_state_mirror_symmetry", False, str(exc))

    try:
        rho_st = steady_state(L)
        tail = top_fock_population(rho_st, space)
        if tail > config.truncation.tail_tolerance:
            raise TruncationBreachError(f"steady-state tail {tail:.2e}")
        bound = analytic.photon_bound(p)
        a_f = np.diag(np.sqrt(np.arange(1, space.field_dim, dtype=float)), k=1)
        n_st = photon_number(rho_st, space.embed_field(a_f.conj().T @ a_f))
        record("steady_state_photon_bound", n_st <= bound + 1e-10,
               f"n={n_st:.3e} bound={bound:.3e}")
        res50 = stationarity_residual(rho_st, space, p.eta)
        record("steady_state_stationarity_identity", res50 < 1e-8, f"residual {res50:.2e}")
    except (DwCavityError, ValueError) as exc:
        record("steady_state", False, f"{type(exc).__name__}: {exc}")

    try:
        gs = ground_state(p.N, p.t, p.u)
        rho0 = initial_state(gs, space)
        from .propagate import evolve, trace_distance
        rk = evolve(rho0, L, [2.0, 5.0], config.truncation)
        ex = evolve_expm(rho0, L, [2.0, 5.0], config.truncation)
        td = max(trace_distance(r1, r2) for (_, r1), (_, r2) in zip(rk, ex))
        record("integrator_consistency", td < 1e-9, f"trace distance {td:.2e}")
    except (DwCavityError, ValueError) as exc:
        record("integrator_consistency", False, f"{type(exc).__name__}: {exc}")

    all_passed = all(c["passed"] for c in checks)
    report = {
        "mode": "validate",
        "all_passed": all_passed,
        "checks": checks,
    }
    return report, all_passed
