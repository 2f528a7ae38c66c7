class MagnolinkError(Exception):
    """Base class for all errors raised by this package.

    ``point`` is filled in by the evaluation pipeline with the operating
    point (or scenario) being evaluated when the error surfaced.
    """

    point = None


class DomainError(MagnolinkError, ValueError):
    pass


class ConfigError(MagnolinkError, ValueError):
    pass


class DegenerateDriveError(MagnolinkError):
    """Mean-field amplitude denominator is (numerically) zero."""


class NonConvergenceError(MagnolinkError):
    def __init__(self, message, last_iterates=()):
        super().__init__(message)
        self.last_iterates = tuple(last_iterates)


class UnstableSystemError(MagnolinkError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateLyapunovError(MagnolinkError):
    pass


class NumericalError(MagnolinkError):
    pass


class UnphysicalCovarianceError(MagnolinkError):
    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = dict(details or {})


class CalibrationError(MagnolinkError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ThresholdError(MagnolinkError):
    """No crossing, or more than one crossing, of the requested level."""

    def __init__(self, message, brackets=()):
        super().__init__(message)
        self.brackets = tuple(brackets)
