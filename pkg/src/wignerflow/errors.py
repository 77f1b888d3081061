class WignerflowError(Exception):
    """Base class for all package errors."""


class ConfigurationError(WignerflowError):
    """Invalid grid, plan, or run configuration."""


class StateConstructionError(WignerflowError):
    """Initial state cannot be built on the requested grid."""


class NormalizationError(WignerflowError):
    """Input wavefunction or distribution is not normalized."""


class InstabilityError(WignerflowError):
    """Propagation produced non-finite values or lost mass."""


class DomainError(WignerflowError):
    """Operation undefined for this Hamiltonian (e.g. no separatrices)."""
