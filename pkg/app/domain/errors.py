"""
Exception hierarchy.

The CLI maps ConfigError to exit code 2 and NumericalError to exit code 3.
"""


class PlapError(Exception):
    """Base class for all laboratory errors."""


class ConfigError(PlapError, ValueError):
    """Invalid grid, parameter, source spec or config file."""


class ConditionParamsError(ConfigError):
    """Condition parameters violate the rules of the requested tag."""


class NumericalError(PlapError, ArithmeticError):
    """A numerical evaluation produced a non-finite value or failed."""


class ConvergenceError(NumericalError):
    """An iterative solve stopped before reaching its tolerance."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NoBoundError(NumericalError):
    """J(0) <= 0: the energy hypothesis for blow-up fails, no T* bound exists."""

    def __init__(self, message, J0=None):
        super().__init__(message)
        self.J0 = J0
