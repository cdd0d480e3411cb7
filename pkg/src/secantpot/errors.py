"""Exception types raised across the package."""


class SecantError(Exception):
    """Base class for all package errors."""


class ExprSyntaxError(SecantError, SyntaxError):
    """Malformed function text. ``position`` is the 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.msg = message
        self.position = position


class UnsupportedOperation(SecantError):
    pass


class PoleAt(SecantError, ZeroDivisionError):
    def __init__(self, z):
        super().__init__(f"pole at z={z!r}")
        self.z = z


class NotSimpleRoot(SecantError):
    pass


class NoConvergence(SecantError):
    pass


class Indeterminate(SecantError):
    """The secant line is horizontal (f(x) = f(y) with x != y) or the point is a pole."""


class ZeroFactor(SecantError):
    pass


class ExceptionalRoot(SecantError):
    pass


class RadiusNotFound(SecantError):
    pass


class OutsideBranchDisk(SecantError):
    pass


class OutsideTrap(SecantError):
    pass


class NoSeriesConvergence(SecantError):
    pass


class NotInBasin(SecantError):
    pass


class EstimatorStalled(SecantError):
    pass


class NotCubic(SecantError):
    pass
