"""Typed errors shared across the package."""


class GradAdversaryError(Exception):
    """Base class for all package errors."""


class DomainError(GradAdversaryError):
    """A point lies outside the domain of the function being evaluated."""


class MonotonicityError(GradAdversaryError):
    """A generated anchor sequence failed to be strictly increasing."""


class AnchorOverflowError(GradAdversaryError):
    """Anchor generation left the representable range.

    ``max_feasible`` carries the largest step count that is still
    representable, when known.
    """

    def __init__(self, message, max_feasible=None):
        super().__init__(message)
        self.max_feasible = max_feasible


class DisjointnessError(GradAdversaryError):
    """Bump intervals overlap."""


class SingularSystemError(GradAdversaryError):
    """The interpolation system could not be solved (m must be > 0)."""


class UnknownScenarioError(GradAdversaryError):
    """Requested scenario name is not in the catalog."""


class ParameterError(GradAdversaryError):
    """A scenario or method parameter is outside its allowed range."""


class ZeroGradientError(GradAdversaryError):
    """The curvature-to-gradient ratio is undefined at a stationary point."""
