"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input problems (parse failures,
non-metric data, size-cap refusals) are distinct from internal invariant
failures (infeasible certificate, decomposition residual too large), which
always indicate a bug upstream rather than bad input.
"""


class PathTSPError(Exception):
    """Base class for all package errors."""


class ParseError(PathTSPError):
    """Malformed instance file; message carries the offending field/line."""


class InvalidInstanceError(PathTSPError):
    """Input data violates a documented precondition (non-metric, s == t, ...)."""


class NotConnectedError(InvalidInstanceError):
    """Graph operation requires a connected graph."""


class SizeLimitError(PathTSPError):
    """Exact oracle refused an instance above its hard size cap."""


class InvariantError(PathTSPError):
    """An internal invariant failed; signals a bug, not bad input."""


class IterationLimitError(InvariantError):
    """Cutting-plane or pricing loop exceeded its round cap.

    Carries the best iterate reached so far in ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
