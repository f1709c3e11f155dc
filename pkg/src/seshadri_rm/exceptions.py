"""Exception hierarchy. Every error raised on bad input derives from
:class:`SeshadriError`, which is a :class:`ValueError`."""


class SeshadriError(ValueError):
    pass


class MixedContextError(SeshadriError):
    """Two surds from different fields Q(sqrt(e)) were combined."""


class SquareDiscriminantError(SeshadriError):
    """Pell equation requested for a perfect square (or D < 2)."""


class NotAmpleError(SeshadriError):
    pass


class NotNormalizableError(SeshadriError):
    pass


class SquareSelfIntersectionError(SeshadriError):
    """sqrt(L^2) is rational, so no Pell bound exists at this point."""


class NonpositiveLengthError(SeshadriError):
    pass


class InvalidRangeError(SeshadriError):
    pass


class BadInputError(SeshadriError):
    pass


class SquareEError(SeshadriError):
    """1 + 8n^2 is a perfect square."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed. This is a bug."""
