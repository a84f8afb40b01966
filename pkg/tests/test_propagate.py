"""Unit tests for time evolution and density-matrix observables."""

import numpy as np
import pytest

from dwcavity import (
    DimensionMismatchError,
    HilbertSpace,
    ModelParams,
    TruncationBreachError,
    TruncationConfig,
    build_hamiltonian,
    build_liouvillian,
    evolve,
    evolve_expm,
)
from dwcavity.analytic import alpha_m
from dwcavity.dimer import ground_state, initial_state
from dwcavity.propagate import (
    atomic_rdm,
    check_density_matrix,
    field_rdm,
    observables,
    photon_number,
    purity,
    top_fock_population,
    trace_distance,
)


def driven_cavity(delta=0.0, eta=0.3, fock_cutoff=10):
    p = ModelParams(N=0, t=0.0, u=0.0, U0=0.0, delta=delta, eta=eta)
    space = HilbertSpace(0, fock_cutoff)
    _, _, H = build_hamiltonian(p, space)
    L = build_liouvillian(H, 1.0, space)
    rho0 = np.zeros((space.dim, space.dim), dtype=complex)
    rho0[0, 0] = 1.0
    return p, space, L, rho0


class TestChecks:
    def test_accepts_valid_state(self):
        rho = np.diag([0.5, 0.3, 0.2]).astype(complex)
        check_density_matrix(rho)

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValueError, match="trace"):
            check_density_matrix(np.diag([0.5, 0.5, 0.5]).astype(complex))

    def test_rejects_nonhermitian(self):
        rho = np.diag([0.6, 0.4]).astype(complex)
        rho[0, 1] = 0.1
        with pytest.raises(ValueError):
            check_density_matrix(rho)

    def test_rejects_negative_population(self):
        with pytest.raises(ValueError):
            check_density_matrix(np.diag([1.2, -0.2]).astype(complex))


class TestObservables:
    def test_trace_distance_extremes(self):
        e0 = np.diag([1.0, 0.0]).astype(complex)
        e1 = np.diag([0.0, 1.0]).astype(complex)
        assert trace_distance(e0, e0) == pytest.approx(0.0, abs=1e-14)
        assert trace_distance(e0, e1) == pytest.approx(1.0)

    def test_partial_traces_consistent(self):
        gs = ground_state(2, 0.4, 0.1)
        space = HilbertSpace(2, 3)
        rho = initial_state(gs, space)
        rdm_a = atomic_rdm(rho, space)
        rdm_f = field_rdm(rho, space)
        assert np.trace(rdm_a).real == pytest.approx(1.0)
        assert np.trace(rdm_f).real == pytest.approx(1.0)
        assert np.allclose(np.real(np.diag(rdm_a)), gs.weights)
        assert rdm_f[0, 0].real == pytest.approx(1.0)

    def test_purity_range(self):
        pure = np.diag([1.0, 0.0]).astype(complex)
        mixed = np.diag([0.5, 0.5]).astype(complex)
        assert purity(pure) == pytest.approx(1.0)
        assert purity(mixed) == pytest.approx(0.5)

    def test_observables_record_fields(self):
        gs = ground_state(2, 0.4, 0.1)
        space = HilbertSpace(2, 3)
        rec = observables(initial_state(gs, space), space, tau=1.5)
        assert rec.tau == 1.5
        assert rec.photon_number == pytest.approx(0.0, abs=1e-14)
        assert rec.atom_populations == pytest.approx(gs.weights)
        assert rec.coherences[(0, 1)] == pytest.approx(
            gs.amplitudes[0] * gs.amplitudes[1])
        assert rec.purity_atomic == pytest.approx(1.0)


class TestEvolve:
    def test_driven_cavity_matches_transient_solution(self):
        # <a^dag a>(tau) = |alpha(tau)|^2 for a cavity driven from vacuum.
        p, space, L, rho0 = driven_cavity(delta=0.8, eta=0.25)
        taus = [0.3, 1.0, 3.0, 10.0]
        a = np.diag(np.sqrt(np.arange(1, space.field_dim, dtype=float)), k=1)
        num = space.embed_field(a.conj().T @ a)
        for tau, rho in evolve(rho0, L, taus):
            expected = abs(alpha_m(tau, 0, p).value) ** 2
            assert photon_number(rho, num) == pytest.approx(expected, rel=1e-7)

    def test_exponential_stepper_agrees_with_runge_kutta(self):
        _, _, L, rho0 = driven_cavity(delta=0.3, eta=0.2, fock_cutoff=6)
        taus = [0.7, 2.0, 8.0]
        rk = evolve(rho0, L, taus)
        ex = evolve_expm(rho0, L, taus)
        for (t1, r1), (t2, r2) in zip(rk, ex):
            assert t1 == t2
            assert trace_distance(r1, r2) < 1e-9

    def test_exponential_stepper_reuses_base_step(self):
        # Long horizons hit the repeated-base-step path and stay physical.
        _, space, L, rho0 = driven_cavity(eta=0.2, fock_cutoff=6)
        out = evolve_expm(rho0, L, [1.0, 50.0, 50.5])
        for _, rho in out:
            check_density_matrix(rho)

    def test_truncation_breach_raises(self):
        _, _, L, rho0 = driven_cavity(delta=0.0, eta=1.5, fock_cutoff=2)
        with pytest.raises(TruncationBreachError):
            evolve_expm(rho0, L, [5.0])

    def test_sample_time_validation(self):
        _, _, L, rho0 = driven_cavity(fock_cutoff=3)
        with pytest.raises(ValueError):
            evolve(rho0, L, [2.0, 1.0])
        with pytest.raises(ValueError):
            evolve(rho0, L, [-1.0, 1.0])
        assert evolve(rho0, L, []) == []

    def test_shape_mismatch_rejected(self):
        _, _, L, _ = driven_cavity(fock_cutoff=3)
        with pytest.raises(DimensionMismatchError):
            evolve(np.eye(2, dtype=complex), L, [1.0])

    def test_cutoff_mismatch_rejected(self):
        _, _, L, rho0 = driven_cavity(fock_cutoff=3)
        with pytest.raises(DimensionMismatchError):
            evolve(rho0, L, [1.0], truncation=TruncationConfig(fock_cutoff=5))

    def test_trajectory_stays_physical_with_atoms(self):
        p = ModelParams.reference(delta=1.0)
        space = HilbertSpace(2, 6)
        _, _, H = build_hamiltonian(p, space)
        L = build_liouvillian(H, 1.0, space)
        rho0 = initial_state(ground_state(p.N, p.t, p.u), space)
        for _, rho in evolve(rho0, L, [1.0, 5.0]):
            check_density_matrix(rho)
            assert top_fock_population(rho, space) < 1e-8
