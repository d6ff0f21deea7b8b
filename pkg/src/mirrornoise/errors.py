"""Exception hierarchy.

Every error raised on purpose by the package derives from ``MirrorNoiseError``
so callers (and the CLI) can map them to exit codes in one place.
"""

from __future__ import annotations


class MirrorNoiseError(Exception):
    """Base class for all package errors."""


class ValidationError(MirrorNoiseError, ValueError):
    """Input rejected before any computation."""


class InvalidParam(ValidationError):
    def __init__(self, name: str, reason: str):
        self.name = name
        self.reason = reason
        super().__init__(f"{name}: {reason}")


class BandwidthInconsistent(ValidationError):
    pass


class BandRegimeInvalid(ValidationError):
    pass


class ZetaSingular(ValidationError):
    """The phase advance sits on a pole of tan."""


class PowerZero(ValidationError):
    """Shot noise diverges at zero power."""


class ZetaZero(ValidationError):
    """No finite optimum exists when the geometry factor vanishes."""


class DiscriminantNonpositive(ValidationError):
    pass


class StepTooCoarse(ValidationError):
    pass


class NumericalError(MirrorNoiseError, ArithmeticError):
    """A numerical procedure failed to meet its own accuracy contract."""


class BracketFailure(NumericalError):
    pass


class QuadratureNonConverged(NumericalError):
    pass


class CutoffTooLow(NumericalError):
    pass


class TailNonConverged(NumericalError):
    pass


class CovarianceNotPSD(NumericalError):
    pass


class RelativisticVelocity(NumericalError):
    pass


class FdrViolation(NumericalError):
    def __init__(self, omega: float, deviation: float):
        self.omega = omega
        self.deviation = deviation
        super().__init__(
            f"sigma(omega) != Im chi(omega) sign(omega): worst offender at "
            f"omega={omega:.6g} with relative deviation {deviation:.3g}"
        )
