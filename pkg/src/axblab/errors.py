"""Exception types raised across the lab."""


class AxbLabError(Exception):
    """Base class for all lab errors."""


class ZeroParam(AxbLabError, ValueError):
    pass


class NotDecomposable(AxbLabError, ValueError):
    pass


class NotComposable(AxbLabError, ValueError):
    pass


class OutsideCarrier(AxbLabError, ValueError):
    pass


class OutsideDomain(AxbLabError, ValueError):
    pass


class ChartMismatch(AxbLabError, ValueError):
    pass


class SingularSupport(AxbLabError, ValueError):
    pass


class ToleranceNotMet(AxbLabError, ArithmeticError):
    pass


class DeformationOutOfRange(AxbLabError, ValueError):
    pass


class SupportTooLarge(AxbLabError, ValueError):
    pass


class GridMismatch(AxbLabError, ValueError):
    pass


class ConfigInvalid(AxbLabError, ValueError):
    pass


class SuiteFailed(AxbLabError):
    pass
