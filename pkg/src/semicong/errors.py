"""Exception hierarchy shared by every module.

The CLI maps these onto process exit codes: invalid input -> 2,
resource exhaustion -> 3, consistency failure -> 1.
"""


class SemicongError(Exception):
    """Base class for all package errors."""


class InvalidInputError(SemicongError, ValueError):
    """Malformed or out-of-contract input."""


class DependenceError(InvalidInputError):
    """A nonzero integer vector has zero gamma-value (gamma is Q-linearly dependent)."""


class InvalidStepError(InvalidInputError):
    """An elementary refinement step whose precondition fails."""


class ResourceError(SemicongError, RuntimeError):
    """A configured budget was exhausted.

    ``partial`` carries whatever partial result the computation had reached,
    or None.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConsistencyError(SemicongError, AssertionError):
    """An internal cross-check (oracle vs. formula) disagreed."""
