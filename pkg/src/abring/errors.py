"""Exception hierarchy shared by every abring module."""


class ABRingError(Exception):
    """Base class for all errors raised by abring."""


class InvalidParameter(ABRingError, ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class ConventionError(InvalidParameter):
    """The ensemble convention (positive branch, s = -1) was violated."""


class InvalidBeta(InvalidParameter):
    pass


class DegenerateField(ABRingError, ValueError):
    """Zero linear coefficient: the strong-field closed forms diverge."""


class NonConvergence(ABRingError, RuntimeError):
    """A truncated series hit its term cap before meeting its tolerance.

    ``partial`` holds whatever was summed before giving up, if anything.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class UnsupportedOrder(ABRingError, ValueError):
    pass


class StepTooLarge(ABRingError, ValueError):
    """Finite-difference stencils of two widths disagree too much."""


class ConfigError(ABRingError, ValueError):
    """A sweep configuration key or value failed to parse or validate."""
