"""Exception and warning types raised across the package."""


class CurvestabError(Exception):
    """Base class for every error raised by curvestab."""


class SingularMatrix(CurvestabError):
    pass


class NotAnEigenvalue(CurvestabError):
    pass


class StationaryPoint(CurvestabError):
    """Velocity vanishes, curvature undefined at this instant."""


class DegenerateOsculation(CurvestabError):
    """Velocity and acceleration are parallel, torsion undefined at this instant."""


class ZeroDenominator(CurvestabError):
    pass


class UnclassifiableLimit(CurvestabError):
    """Dominant oscillating terms are not bounded away from zero."""


class NonGenericInitialValue(CurvestabError):
    """Some canonical coordinate of the initial value is (numerically) zero."""


class Inconclusive(CurvestabError):
    pass


class BadRange(CurvestabError):
    pass


class ClassificationMismatch(CurvestabError):
    """Table lookup and exp-polynomial analysis disagree without a known cause."""


class ParseError(CurvestabError):
    pass


class DimensionError(CurvestabError):
    pass


class IllConditionedTransform(UserWarning):
    """The similarity transform to real Jordan form is badly conditioned."""
