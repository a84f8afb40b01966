"""Parameters, Hilbert space and operators for the double-well / cavity system.

All rates are stored in units of the cavity loss rate kappa (kappa = 1
internally).  ``kappa_ref`` keeps the physical value of kappa in rad/s so
dimensionless times can be converted back to seconds.

The composite basis is atom-major: |m> (x) |n_ph>  ->  index m*field_dim + n_ph,
where |m> = |m, N-m> is the state with m atoms in the left well.  Every module
shares this layout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError

# Reference cavity loss rate: kappa = 2*pi x 1.5 MHz, in rad/s.
KAPPA_REF_DEFAULT = 2.0 * math.pi * 1.5e6


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the atom-cavity Hamiltonian, in units of kappa.

    N      : atom count
    t      : interwell tunneling rate
    u      : on-site interaction energy
    U0     : dispersive cavity shift per photon (left well)
    delta  : pump-cavity detuning
    eta    : pump amplitude
    kappa_ref : physical cavity loss rate in rad/s, for unit recovery
    """

    N: int
    t: float
    u: float
    U0: float
    delta: float
    eta: float
    kappa_ref: float = KAPPA_REF_DEFAULT

    def __post_init__(self):
        if self.N < 0 or self.N != int(self.N):
            raise ValueError(f"N must be a non-negative integer, got {self.N}")
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.kappa_ref <= 0:
            raise ValueError(f"kappa_ref must be positive, got {self.kappa_ref}")

    @classmethod
    def from_two_pi_hz(cls, N, t_hz, u_hz, kappa_hz, U0_hz, eta_hz, delta_hz):
        """Build from frequencies quoted as '2*pi x value-in-Hz'.

        The 2*pi factor is applied uniformly, so it cancels in every ratio;
        only kappa_ref keeps it.
        """
        if kappa_hz <= 0:
            raise ValueError("kappa must be positive")
        return cls(
            N=N,
            t=t_hz / kappa_hz,
            u=u_hz / kappa_hz,
            U0=U0_hz / kappa_hz,
            delta=delta_hz / kappa_hz,
            eta=eta_hz / kappa_hz,
            kappa_ref=2.0 * math.pi * kappa_hz,
        )

    @classmethod
    def reference(cls, delta=0.0, eta=None, N=2):
        """The reference parameter point: (t, u) = 2pi x (400, 200) Hz,
        (kappa, U0, eta) = 2pi x (1.5, 6.0, 0.1) x 1e6 Hz.

        ``delta`` is given in units of kappa; ``eta`` may be overridden
        (units of kappa).
        """
        p = cls.from_two_pi_hz(
            N=N,
            t_hz=400.0,
            u_hz=200.0,
            kappa_hz=1.5e6,
            U0_hz=6.0e6,
            eta_hz=0.1e6,
            delta_hz=0.0,
        )
        return p.replace(delta=delta, eta=p.eta if eta is None else eta)

    def replace(self, **kwargs) -> "ModelParams":
        from dataclasses import replace as _replace

        return _replace(self, **kwargs)


def reduce_couplings(delta, U0, J1, J2, N):
    """Reduce generic mode overlaps (J1, J2) to the canonical (1, 0) form.

    Returns the effective detuning and dispersive shift
    (delta - U0*J2*N, U0*(J1 - J2)).  With J1 = J2 the returned shift is
    zero and the field decouples from the atomic distribution.
    """
    if not (0.0 <= J1 <= 1.0) or not (0.0 <= J2 <= 1.0):
        raise ValueError(f"J1, J2 must lie in [0, 1], got ({J1}, {J2})")
    return delta - U0 * J2 * N, U0 * (J1 - J2)


@dataclass(frozen=True)
class TruncationConfig:
    """Fock-space truncation and its self-check threshold."""

    fock_cutoff: int = 8
    tail_tolerance: float = 1e-8

    def __post_init__(self):
        if self.fock_cutoff < 1:
            raise ValueError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")
        if not (0.0 < self.tail_tolerance < 1.0):
            raise ValueError(
                f"tail_tolerance must lie in (0, 1), got {self.tail_tolerance}"
            )


@dataclass(frozen=True)
class HilbertSpace:
    """Fixed-N atomic sector tensor a truncated Fock space, atom-major."""

    n_atoms: int
    fock_cutoff: int

    def __post_init__(self):
        if self.n_atoms < 0:
            raise ValueError("n_atoms must be non-negative")
        if self.fock_cutoff < 1:
            raise ValueError("fock_cutoff must be >= 1")

    @property
    def atom_dim(self) -> int:
        return self.n_atoms + 1

    @property
    def field_dim(self) -> int:
        return self.fock_cutoff + 1

    @property
    def dim(self) -> int:
        return self.atom_dim * self.field_dim

    def index(self, m: int, n_ph: int) -> int:
        """Composite index of |m> (x) |n_ph>."""
        if not (0 <= m < self.atom_dim and 0 <= n_ph < self.field_dim):
            raise IndexError(f"basis labels ({m}, {n_ph}) out of range")
        return m * self.field_dim + n_ph

    def embed_atom(self, A: np.ndarray) -> np.ndarray:
        """Lift an atomic operator to the composite space."""
        if A.shape != (self.atom_dim, self.atom_dim):
            raise DimensionMismatchError(
                f"atomic operator shape {A.shape} != {(self.atom_dim,) * 2}"
            )
        return np.kron(A, np.eye(self.field_dim))

    def embed_field(self, F: np.ndarray) -> np.ndarray:
        """Lift a field operator to the composite space."""
        if F.shape != (self.field_dim, self.field_dim):
            raise DimensionMismatchError(
                f"field operator shape {F.shape} != {(self.field_dim,) * 2}"
            )
        return np.kron(np.eye(self.atom_dim), F)


@dataclass
class Operator:
    """A labeled dense complex matrix on a composite HilbertSpace."""

    matrix: np.ndarray
    space: HilbertSpace
    label: str = ""

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        d = self.space.dim
        if self.matrix.shape != (d, d):
            raise DimensionMismatchError(
                f"operator '{self.label}': shape {self.matrix.shape} != {(d, d)}"
            )

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.space, self.label + "^dag")


def destroy(dim: int) -> np.ndarray:
    """Truncated annihilation matrix: a|n> = sqrt(n)|n-1>."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def build_field_ops(space: HilbertSpace):
    """Cavity (a, a^dag) on the composite space (identity on the atoms)."""
    a_f = destroy(space.field_dim)
    a = Operator(space.embed_field(a_f), space, "a")
    adag = Operator(space.embed_field(a_f.conj().T), space, "a^dag")
    return a, adag


def hopping_amplitude(m, N):
    """f(m) = sqrt((m+1)(N-m)), the |m> -> |m+1> matrix element of b1^dag b2."""
    return math.sqrt((m + 1) * (N - m))


def build_atom_ops(space: HilbertSpace):
    """Well populations n1, n2 and the hopping operator b1^dag b2 + b2^dag b1.

    In the |m> = |m, N-m> basis: n1|m> = m|m>, n2|m> = (N-m)|m>,
    hop|m> = f(m)|m+1> + f(m-1)|m-1>.
    """
    N = space.n_atoms
    m = np.arange(N + 1, dtype=float)
    n1_a = np.diag(m).astype(complex)
    n2_a = np.diag(N - m).astype(complex)
    hop_a = np.zeros((N + 1, N + 1), dtype=complex)
    for k in range(N):
        f = hopping_amplitude(k, N)
        hop_a[k + 1, k] = f  # b1^dag b2
        hop_a[k, k + 1] = f  # b2^dag b1
    n1 = Operator(space.embed_atom(n1_a), space, "n1")
    n2 = Operator(space.embed_atom(n2_a), space, "n2")
    hop = Operator(space.embed_atom(hop_a), space, "b1^dag b2 + b2^dag b1")
    return n1, n2, hop


def build_schwinger(space: HilbertSpace):
    """Collective spin operators for the two-mode sector.

    S_x = (b2^dag b1 + b1^dag b2)/2, S_y = i(b2^dag b1 - b1^dag b2)/2,
    S_z = (n1 - n2)/2; S_z|m> = (m - N/2)|m>.
    """
    N = space.n_atoms
    sz_a = np.diag(np.arange(N + 1) - N / 2.0).astype(complex)
    raise_a = np.zeros((N + 1, N + 1), dtype=complex)  # b1^dag b2
    for k in range(N):
        raise_a[k + 1, k] = hopping_amplitude(k, N)
    lower_a = raise_a.conj().T
    sx_a = 0.5 * (raise_a + lower_a)
    sy_a = 0.5j * (lower_a - raise_a)
    Sx = Operator(space.embed_atom(sx_a), space, "S_x")
    Sy = Operator(space.embed_atom(sy_a), space, "S_y")
    Sz = Operator(space.embed_atom(sz_a), space, "S_z")
    return Sx, Sy, Sz


def build_hamiltonian(params: ModelParams, space: HilbertSpace):
    """Assemble H = H_t + H_non on the composite space (units of kappa).

    H_t   = -t (b1^dag b2 + b2^dag b1)
    H_non = -delta a^dag a + eta (a + a^dag) + U0 a^dag a n1
            + (u/2) (n1(n1-1) + n2(n2-1))

    Assumes the reduced (J1, J2) = (1, 0) coupling; use reduce_couplings
    first for the generic overlap case.
    """
    if space.n_atoms != params.N:
        raise DimensionMismatchError(
            f"space has N={space.n_atoms} but params have N={params.N}"
        )
    a, adag = build_field_ops(space)
    n1, n2, hop = build_atom_ops(space)
    num = adag.matrix @ a.matrix

    Ht_m = -params.t * hop.matrix
    onsite = 0.5 * params.u * (
        n1.matrix @ (n1.matrix - np.eye(space.dim))
        + n2.matrix @ (n2.matrix - np.eye(space.dim))
    )
    Hnon_m = (
        -params.delta * num
        + params.eta * (a.matrix + adag.matrix)
        + params.U0 * num @ n1.matrix
        + onsite
    )
    Ht = Operator(Ht_m, space, "H_t")
    Hnon = Operator(Hnon_m, space, "H_non")
    H = Operator(Ht_m + Hnon_m, space, "H")
    return Ht, Hnon, H


def warn_if_attractive(u):
    """The physics below assumes repulsive on-site interaction."""
    if u < 0:
        warnings.warn(
            f"attractive on-site interaction u={u} < 0; results untested",
            stacklevel=3,
        )
