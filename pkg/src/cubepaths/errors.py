"""Exception hierarchy shared by every module."""


class CubePathsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidIndex(CubePathsError, ValueError):
    """A vertex or translation vector violates a parity/range precondition."""


class InvalidParameter(CubePathsError, ValueError):
    """A structural parameter (m, q, r, k, ...) is out of its domain."""


class ResourceLimit(CubePathsError):
    """The requested object is too large to materialize."""


class Unsupported(CubePathsError):
    """No construction is available for the requested parameters."""


class NotDivisible(CubePathsError):
    """P_m cannot divide Q_q because the necessary condition fails."""
