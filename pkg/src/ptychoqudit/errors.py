"""Exception hierarchy shared by every module of the package."""


class PtychoQuditError(ValueError):
    """Base class for all validation and numerical errors raised here."""


class ZeroVector(PtychoQuditError):
    pass


class DimensionTooSmall(PtychoQuditError):
    pass


class DimensionMismatch(PtychoQuditError):
    pass


class NotNormalized(PtychoQuditError):
    pass


class IndexOutOfRange(PtychoQuditError, IndexError):
    pass


class InvalidAperture(PtychoQuditError):
    pass


class InvalidModePlan(PtychoQuditError):
    pass


class EnvelopeZero(PtychoQuditError):
    """A selected OAM mode sits on a null of the sinc diffraction envelope."""


class ShiftOutOfRange(PtychoQuditError):
    pass


class CoverageViolation(PtychoQuditError):
    """Some level of the state space is not addressed by any projector."""


class OverlapViolation(PtychoQuditError):
    """Some projector has no partially overlapping partner."""


class InvalidShots(PtychoQuditError):
    pass


class NegativeData(PtychoQuditError):
    pass


class NonFiniteData(PtychoQuditError):
    pass


class InvalidConfig(PtychoQuditError):
    pass
