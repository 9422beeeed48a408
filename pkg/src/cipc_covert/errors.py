"""Exception hierarchy shared by the analytics, optimizer and CLI."""


class CovertError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CovertError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class ConfigError(CovertError, ValueError):
    """A configuration value or file is invalid."""


class ConvergenceError(CovertError, ArithmeticError):
    """A series or iteration did not reach the requested tolerance."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature ran out of subdivisions.

    Carries the best estimate and its error bound so callers can decide
    whether the result is still usable.
    """

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


class BracketError(ConvergenceError):
    """The root of a monotone target could not be bracketed."""


class InfeasibleError(CovertError):
    """No design point satisfies the covertness constraint."""
