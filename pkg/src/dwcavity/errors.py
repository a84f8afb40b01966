"""Exception types shared across the package."""


class DwCavityError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(DwCavityError):
    """Operands live on incompatible Hilbert spaces."""


class TruncationBreachError(DwCavityError):
    """Population in the top Fock level exceeded the configured tail tolerance.

    Increase the Fock cutoff and rerun.
    """


class DegenerateSteadyStateError(DwCavityError):
    """The Liouvillian null space has dimension > 1; no unique steady state."""


class DegenerateGroundStateError(DwCavityError):
    """The atomic ground level is (numerically) degenerate."""


class InfiniteCoherenceTimeError(DwCavityError):
    """No decoherence channel: eta = 0 or U0 = 0 makes tau_mn infinite."""


class EigensolverError(DwCavityError):
    """The dense eigensolver failed to converge."""


class ConfigError(DwCavityError):
    """Invalid sweep configuration."""
