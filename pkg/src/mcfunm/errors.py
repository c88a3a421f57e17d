"""Exception hierarchy shared across the package.

Each branch maps onto one CLI exit code: usage (1), data (2),
numerical/convergence (3), resource (4).
"""


class McfunmError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ArgumentError(McfunmError):
    """Invalid argument or parameter combination supplied by the caller."""

    exit_code = 1


class DataError(McfunmError):
    """Problem with input data (files, graphs, matrices)."""

    exit_code = 2


class ParseError(DataError):
    """Malformed input file; message carries the offending line number."""


class DegenerateInputError(DataError):
    """Input is structurally unusable (e.g. empty graph after filtering)."""


class ConvergenceError(McfunmError):
    """An iterative or stochastic procedure failed to converge."""

    exit_code = 3

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ResourceError(McfunmError):
    """The request would exceed a guard on memory or problem size."""

    exit_code = 4
