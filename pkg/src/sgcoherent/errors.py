"""Exception types raised by the numerical routines."""


class DomainError(ValueError):
    """Argument outside the domain of the operation."""


class QuadratureError(ArithmeticError):
    """Quadrature did not reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class TruncationError(RuntimeError):
    """Amplitude reached the top of the truncated basis."""

    def __init__(self, message, suggested_n=None):
        super().__init__(message)
        self.suggested_n = suggested_n


class OracleDisagreement(ArithmeticError):
    """Two independent integration schemes disagree."""


class UndefinedMomentError(ArithmeticError):
    """Mandel Q requested for a state with zero mean photon number."""
