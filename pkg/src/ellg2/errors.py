"""Exception hierarchy shared by every module."""


class EllipticError(Exception):
    """Base class for all errors raised by ellg2."""


class DomainError(EllipticError, ValueError):
    """An argument lies outside the domain of the function."""


class PoleError(DomainError):
    """Evaluation point is too close to a pole of the function."""


class DegenerateParameterError(DomainError):
    """Parameters hit a degenerate configuration (a guarded divisor vanishes)."""


class ConvergenceError(EllipticError, ArithmeticError):
    """A truncated product or series needs more terms than allowed."""
