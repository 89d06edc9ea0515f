"""Exception hierarchy shared by every module."""


class EigSignError(Exception):
    """Base class for all errors raised by eigsign."""


class DimensionError(EigSignError, ValueError):
    pass


class NonFiniteError(EigSignError, ValueError):
    pass


class SingularMatrixError(EigSignError):
    pass


class AsymmetricMatrixError(EigSignError, ValueError):
    pass


class ConvergenceError(EigSignError):
    """An iterative routine ran out of iterations.

    The last residual is kept on ``residual`` so callers can decide whether
    the result is usable anyway.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class ProblemValidationError(EigSignError, ValueError):
    pass


class DegenerateInstanceError(EigSignError):
    pass


class DegenerateSystemError(EigSignError):
    pass


class DegenerateGapError(EigSignError):
    pass


class AlreadyConverged(EigSignError):
    """Raised by a flip step when the residual is already (numerically) zero."""


class OracleSizeError(EigSignError, ValueError):
    pass


class AmbiguousSolutionError(EigSignError):
    pass
