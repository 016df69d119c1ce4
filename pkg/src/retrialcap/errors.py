class RetrialCapError(Exception):
    """Base class for all package errors."""


class DomainError(RetrialCapError, ValueError):
    """Invalid parameter, state or level."""


class CapacityError(RetrialCapError):
    """State space larger than the configured cap."""


class StructuralError(RetrialCapError):
    """Generator is not irreducible (stationary vector not unique)."""


class SolverError(RetrialCapError):
    """Numerical failure while solving for the stationary vector."""


class ConfigurationError(RetrialCapError, ValueError):
    """Inconsistent run configuration (e.g. simulation horizon)."""
