"""Driven-cavity dynamics of cold atoms in a double-well potential.

Dense, desk-scale simulation of N two-level atoms in a Bose-Hubbard dimer
dispersively coupled to a single damped, driven cavity mode, together with
the closed-form short-time / steady-state / spectral reference results used
to validate it.
"""

from .analytic import (
    CoherentAmplitude,
    DecoherenceTime,
    alpha_asymptote,
    alpha_m,
    classical_steady,
    coherent_state,
    decoherence_time,
    fit_decay_rate,
    photon_bound,
    quasi_steady_photon,
    steady_photon_from_populations,
    weak_pump_steady,
)
from .dimer import DimerGroundState, dimer_hamiltonian, ground_state, initial_state
from .errors import (
    ConfigError,
    DegenerateGroundStateError,
    DegenerateSteadyStateError,
    DimensionMismatchError,
    DwCavityError,
    EigensolverError,
    InfiniteCoherenceTimeError,
    TruncationBreachError,
)
from .liouville import (
    Liouvillian,
    SpectrumResult,
    build_liouvillian,
    null_space_dimension,
    spectrum,
    steady_state,
    unvec,
    vec,
)
from .model import (
    KAPPA_REF_DEFAULT,
    HilbertSpace,
    ModelParams,
    Operator,
    TruncationConfig,
    build_atom_ops,
    build_field_ops,
    build_hamiltonian,
    build_schwinger,
    reduce_couplings,
)
from .propagate import (
    TraceRecord,
    atomic_rdm,
    check_density_matrix,
    evolve,
    evolve_expm,
    field_rdm,
    observables,
    photon_number,
    purity,
    top_fock_population,
    trace_distance,
)

__version__ = "0.1.0"
