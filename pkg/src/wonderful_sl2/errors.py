"""Exception types raised across the package."""


class WonderfulError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(WonderfulError, ValueError):
    pass


class NotPrime(ConfigError):
    pass


class EvenPrime(ConfigError):
    pass


class PrecisionTooSmall(ConfigError):
    pass


class ZeroDenominator(WonderfulError, ZeroDivisionError):
    pass


class DivisionByZero(WonderfulError, ZeroDivisionError):
    pass


class PrecisionExhausted(WonderfulError, ArithmeticError):
    """Every stored digit of a value was lost to cancellation."""


class ZeroArgument(WonderfulError, ValueError):
    pass


class SingularMatrix(WonderfulError, ZeroDivisionError):
    pass


class NonInvertibleDiagonal(WonderfulError, ValueError):
    pass


class PivotZero(WonderfulError, ValueError):
    pass


class NotUnimodular(WonderfulError, ValueError):
    pass


class DegenerateSampler(WonderfulError, RuntimeError):
    pass


class ZeroMatrix(WonderfulError, ValueError):
    pass


class SolverFailed(WonderfulError, RuntimeError):
    pass


class UnsupportedFamily(WonderfulError, ValueError):
    pass


class TooFewPoints(WonderfulError, ValueError):
    pass


class NotRankOne(WonderfulError, ValueError):
    pass
