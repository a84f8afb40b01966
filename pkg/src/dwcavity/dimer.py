"""Bare atomic dimer: ground state of the double-well Hamiltonian.

The (N+1)x(N+1) matrix diagonalized here is the atomic Hamiltonian in the
|m> = |m, N-m> basis: diagonal (u/2)(m(m-1) + (N-m)(N-m-1)), off-diagonal
-t*f(m) with f(m) = sqrt((m+1)(N-m)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGroundStateError, DimensionMismatchError
from .model import HilbertSpace, hopping_amplitude, warn_if_attractive


@dataclass(frozen=True)
class DimerGroundState:
    """Ground state |G> of the bare dimer, with real amplitudes g_m = <m|G>."""

    n_atoms: int
    amplitudes: np.ndarray
    energy: float

    @property
    def weights(self) -> np.ndarray:
        """|<m|G>|^2, the coherent-state mixture weights."""
        return self.amplitudes**2


def dimer_hamiltonian(N, t, u) -> np.ndarray:
    """Atomic Hamiltonian matrix in the |m> basis (units of kappa)."""
    m = np.arange(N + 1, dtype=float)
    H = np.diag(0.5 * u * (m * (m - 1) + (N - m) * (N - m - 1)))
    for k in range(N):
        H[k + 1, k] = H[k, k + 1] = -t * hopping_amplitude(k, N)
    return H


def ground_state(N, t, u) -> DimerGroundState:
    """Lowest eigenstate of the dimer Hamiltonian.

    Requires t > 0, which makes the matrix irreducible with negative
    off-diagonals and hence the ground vector unique and strictly positive
    (after the global sign is fixed by g_0 >= 0).
    """
    if t <= 0:
        raise ValueError(f"tunneling rate t must be positive, got {t}")
    warn_if_attractive(u)
    H = dimer_hamiltonian(N, t, u)
    evals, evecs = np.linalg.eigh(H)
    if N >= 1:
        gap = evals[1] - evals[0]
        scale = max(abs(evals[0]), abs(evals[-1]), 1.0)
        if gap <= 1e-12 * scale:
            raise DegenerateGroundStateError(
                f"ground level degenerate within tolerance (gap={gap})"
            )
    g = np.real(evecs[:, 0])
    if g[0] < 0:
        g = -g
    g /= np.linalg.norm(g)
    return DimerGroundState(n_atoms=N, amplitudes=g, energy=float(evals[0]))


def initial_state(gs: DimerGroundState, space: HilbertSpace) -> np.ndarray:
    """Density matrix |G><G| (x) |0><0|: atoms in the dimer ground state,
    field in vacuum."""
    if gs.n_atoms != space.n_atoms:
        raise DimensionMismatchError(
            f"ground state has N={gs.n_atoms}, space has N={space.n_atoms}"
        )
    vac = np.zeros(space.field_dim)
    vac[0] = 1.0
    psi = np.kron(gs.amplitudes, vac).astype(complex)
    return np.outer(psi, psi.conj())
