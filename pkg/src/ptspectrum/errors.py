"""Exception types raised across the package."""


class SpectrumError(Exception):
    """Base class for every error raised by ptspectrum."""


# special functions
class PoleError(SpectrumError, ArithmeticError):
    """log Gamma requested at a non-positive integer."""


class BParameterPole(SpectrumError, ArithmeticError):
    """1F1 lower parameter is a non-positive integer."""


class NonConvergence(SpectrumError, ArithmeticError):
    """A series hit its term cap before meeting the stop rule."""


# root finding
class BoundaryZeroSuspected(SpectrumError):
    """Argument-principle sampling could not resolve the boundary phase."""


class NoConvergence(SpectrumError):
    """An iterative root solver ran out of budget or diverged."""


class DerivativeVanished(SpectrumError, ArithmeticError):
    """Newton step undefined because the derivative is (numerically) zero."""


class CompletenessMismatch(SpectrumError):
    """Number of located roots disagrees with the winding number."""

    def __init__(self, found: int, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"found {found} roots but winding number is {expected}")


class CompletenessWarning(UserWarning):
    """Non-fatal counterpart of :class:`CompletenessMismatch`."""


# wave functions
class CoefficientPole(SpectrumError, ArithmeticError):
    """The odd-part coefficient b2 is infinite at this energy."""


class QuadratureFailure(SpectrumError):
    pass


class InvalidRange(SpectrumError, ValueError):
    pass


class InvalidSampling(SpectrumError, ValueError):
    pass


# shooting oracle
class StepLimitExceeded(SpectrumError):
    pass


class StiffnessFailure(SpectrumError):
    """The adaptive integrator's step size underflowed."""
