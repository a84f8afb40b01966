"""Vectorized Liouvillian: construction, steady state, spectrum.

Vectorization is column-stacking (Fortran order): vec(A X B) = (B^T (x) A) vec(X).
The master equation rho_dot = -i[H, rho] + kappa(2 a rho a^dag - a^dag a rho
- rho a^dag a) then becomes

    L = -i (I (x) H - H^T (x) I)
        + kappa (2 conj(a) (x) a - I (x) a^dag a - (a^dag a)^T (x) I).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateSteadyStateError,
    DimensionMismatchError,
    EigensolverError,
)
from .model import HilbertSpace, Operator, build_field_ops

VECTORIZATION = "column-stacking"


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of vec."""
    d = round(np.sqrt(v.size))
    return v.reshape((d, d), order="F")


@dataclass
class Liouvillian:
    """Dense superoperator of the master equation, plus its ingredients.

    ``matrix`` acts on column-stacked density matrices.  The Hamiltonian and
    jump operator are kept so time stepping can use the cheaper D x D form.
    """

    matrix: np.ndarray
    space: HilbertSpace
    hamiltonian: np.ndarray
    jump: np.ndarray  # sqrt-rate NOT absorbed: plain annihilation operator
    kappa: float
    vectorization: str = VECTORIZATION

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __post_init__(self):
        self._adag = self.jump.conj().T
        self._num = self._adag @ self.jump

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Right-hand side of the master equation in D x D form."""
        H, a, k = self.hamiltonian, self.jump, self.kappa
        return (
            -1j * (H @ rho - rho @ H)
            + k * (2.0 * a @ rho @ self._adag - self._num @ rho - rho @ self._num)
        )


def build_liouvillian(H: Operator, kappa: float, space: HilbertSpace) -> Liouvillian:
    """Superoperator for rho_dot = -i[H, rho] + kappa D[a] rho."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if H.space != space:
        raise DimensionMismatchError("Hamiltonian lives on a different space")
    Hm = H.matrix
    herm_defect = np.abs(Hm - Hm.conj().T).max()
    if herm_defect > 1e-10:
        raise ValueError(f"Hamiltonian not Hermitian (defect {herm_defect:.2e})")

    a, adag = build_field_ops(space)
    am = a.matrix
    num = adag.matrix @ am
    D = space.dim
    eye = np.eye(D)

    L = -1j * (np.kron(eye, Hm) - np.kron(Hm.T, eye))
    L += kappa * (
        2.0 * np.kron(am.conj(), am)
        - np.kron(eye, num)
        - np.kron(num.T, eye)
    )

    # Trace preservation: the trace functional must annihilate L.
    trace_row = vec(np.eye(D)).conj() @ L
    if np.abs(trace_row).max() > 1e-10 * max(np.abs(L).max(), 1.0):
        raise AssertionError("Liouvillian is not trace-preserving")

    return Liouvillian(
        matrix=L, space=space, hamiltonian=Hm, jump=am, kappa=kappa
    )


def default_zero_tol(L: Liouvillian) -> float:
    """Threshold separating the stationary eigenvalue(s) from slow decay.

    Scaled well below the slowest physical rates resolvable at double
    precision so that kappa*tau_max up to ~1e8 is still classified as a
    decaying mode.
    """
    return 1e-12 * np.abs(L.matrix).max() * L.space.dim


def null_space_dimension(L: Liouvillian, tol: float | None = None) -> int:
    """Number of singular values of L below tol (dimension of the kernel)."""
    s = np.linalg.svd(L.matrix, compute_uv=False)
    if tol is None:
        tol = default_zero_tol(L)
    return int(np.sum(s < tol))


def steady_state(
    L: Liouvillian,
    zero_tol: float | None = None,
    allow_degenerate: bool = False,
    check_degeneracy: bool = False,
) -> np.ndarray:
    """Solve L rho = 0, tr rho = 1 via the bordered least-squares system.

    Degeneracy (kernel dimension > 1) raises DegenerateSteadyStateError
    unless ``allow_degenerate``, in which case the minimum-norm member of
    the stationary family is returned.  The rank-revealing QR solve flags
    degeneracy cheaply; pass ``check_degeneracy=True`` for an additional
    exact SVD kernel count (cost: one full SVD of L).
    """
    if zero_tol is None:
        zero_tol = default_zero_tol(L)
    D = L.space.dim
    A = np.vstack([L.matrix, vec(np.eye(D)).conj()[None, :]])
    b = np.zeros(L.dim + 1, dtype=complex)
    b[-1] = 1.0
    sol, _, rank, _ = scipy.linalg.lstsq(A, b, lapack_driver="gelsy")
    degenerate = rank < L.dim

    if check_degeneracy and not degenerate:
        degenerate = null_space_dimension(L, zero_tol) > 1

    if degenerate:
        if not allow_degenerate:
            raise DegenerateSteadyStateError(
                "Liouvillian kernel has dimension > 1; steady state not unique"
            )
        # minimum-norm representative of the stationary family
        sol, _, _, _ = scipy.linalg.lstsq(A, b, lapack_driver="gelsd")

    rho = unvec(sol)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real

    residual = np.linalg.norm(L.matrix @ vec(rho))
    scale = np.linalg.norm(L.matrix)
    if residual > 1e-10 * scale:
        raise DegenerateSteadyStateError(
            f"steady-state residual {residual:.2e} exceeds 1e-10*||L|| = "
            f"{1e-10 * scale:.2e}"
        )
    return rho


@dataclass
class SpectrumResult:
    """Liouvillian eigenvalues s_j = -R_j + i I_j and the relaxation time.

    tau_max = max{1/R_j : R_j > zero_tol}, in units of 1/kappa.
    ``diverging`` flags parameter points where the slowest rate sits within
    a decade of the zero threshold, i.e. tau_max is not trustworthy.
    """

    eigenvalues: np.ndarray
    zero_tol: float
    zero_count: int
    tau_max: float
    diverging: bool


def spectrum(L: Liouvillian, zero_tol: float | None = None) -> SpectrumResult:
    """Full dense eigenvalue set of L with the slowest-rate summary."""
    if L.dim > 4096:
        raise DimensionMismatchError(
            f"dense spectrum limited to side length 4096, got {L.dim}; "
            "reduce the Fock cutoff"
        )
    if zero_tol is None:
        zero_tol = default_zero_tol(L)
    if zero_tol <= 0:
        raise ValueError("zero_tol must be positive")
    try:
        evals = np.linalg.eigvals(L.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"dense eigensolver failed: {exc}") from exc

    rates = -evals.real
    zero_count = int(np.sum(np.abs(evals.real) <= zero_tol))
    decaying = rates[rates > zero_tol]
    if decaying.size == 0:
        tau_max = np.inf
        diverging = True
    else:
        r_min = decaying.min()
        tau_max = 1.0 / r_min
        diverging = bool(r_min < 10.0 * zero_tol)
    return SpectrumResult(
        eigenvalues=evals,
        zero_tol=zero_tol,
        zero_count=zero_count,
        tau_max=float(tau_max),
        diverging=diverging,
    )
