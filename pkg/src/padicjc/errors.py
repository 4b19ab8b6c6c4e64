"""Domain errors raised by padicjc.

Every error carries an optional ``operation`` name and the offending input so
the CLI can report them verbatim.
"""


class PadicError(Exception):
    """Base class of all domain errors."""

    def __init__(self, message, *, operation=None, value=None):
        super().__init__(message)
        self.operation = operation
        self.value = value


class InsufficientPrecision(PadicError, ArithmeticError):
    pass


class DivisionByZero(PadicError, ZeroDivisionError):
    pass


class NotASquare(PadicError, ValueError):
    pass


class HenselConditionFailed(PadicError, ValueError):
    pass


class OutsideDomain(PadicError, ValueError):
    pass


class NoSolution(PadicError, ValueError):
    pass


class LevelMismatch(PadicError, ValueError):
    pass


class DegenerateLevel(PadicError, ValueError):
    pass


class WrongPrimeClass(PadicError, ValueError):
    pass


class ChartSingularity(PadicError, ValueError):
    pass


class DegenerateParameter(PadicError, ValueError):
    pass


class ConstraintViolated(PadicError, ValueError):
    pass


class WindowTooSmall(PadicError, ValueError):
    pass


class UnsupportedPrime(PadicError, ValueError):
    pass


class IoFailure(PadicError, OSError):
    pass
