"""Typed exceptions raised across the package."""


class ReslabError(Exception):
    """Base class for package errors."""


class PoleError(ReslabError, ArithmeticError):
    """Argument lies on (or numerically at) a pole."""


class ConvergenceError(ReslabError, RuntimeError):
    """An iterative or quadrature scheme missed its error target."""


class MagnitudeOverflow(ReslabError, OverflowError):
    """Result magnitude exceeds the representable range."""


class OffDomain(ReslabError, ValueError):
    """Method preconditions are violated for the given arguments."""


class DimensionMismatch(ReslabError, ValueError):
    pass


class RankDeficient(ReslabError, ValueError):
    pass


class PlaneOverflow(ReslabError, ValueError):
    pass


class AngleParse(ReslabError, ValueError):
    pass


class ExplosionGuard(ReslabError, RuntimeError):
    """Predicted output size exceeds the configured cap."""


class PrecisionExhausted(ReslabError, ArithmeticError):
    pass


class TruncationTooSmall(ReslabError, ValueError):
    pass


class ContourThroughZero(ReslabError, ArithmeticError):
    pass


class GridTooCoarse(ReslabError, ValueError):
    pass


class EmptyInput(ReslabError, ValueError):
    pass
