"""Exception hierarchy shared by every subpackage.

The CLI maps these onto exit codes, so new failure modes should subclass one
of the three families below rather than ``Exception`` directly.
"""


class OverlapError(Exception):
    """Base class for all package errors."""


class ConfigurationError(OverlapError, ValueError):
    """Invalid user-facing configuration or parameter value."""


class ParameterError(ConfigurationError):
    """A numeric argument lies outside its documented domain."""


class DimensionError(ConfigurationError):
    """Shapes of matrices, states or occupations do not agree."""


class UnsupportedAddressError(ConfigurationError):
    """An MZI address cannot be used for the requested operation."""


class CapacityError(OverlapError):
    """A requested Hilbert-space or cutoff size exceeds the hard cap."""


class NumericalError(OverlapError):
    """A numerical routine failed to produce a trustworthy result."""


class FitError(NumericalError):
    """Least-squares fit is rank deficient or underdetermined."""


class SolverError(NumericalError):
    """Iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
