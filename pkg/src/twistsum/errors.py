"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` (the class name) and
the process exit status the CLI maps it to.
"""

from __future__ import annotations


class TwistSumError(Exception):
    exit_code = 1

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidInput(TwistSumError):
    exit_code = 2


class CapExceeded(TwistSumError):
    exit_code = 3


class MalformedNumber(InvalidInput):
    pass


class ZeroDenominator(InvalidInput):
    pass


class DuplicateEntries(InvalidInput):
    pass


class DuplicatePoints(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class NotAPermutation(InvalidInput):
    pass


class OverlappingPairs(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput):
    pass


class NonPositiveValue(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class ZeroNormDirection(InvalidInput):
    pass


class NotCollinear(InvalidInput):
    pass


class NotValidated(InvalidInput):
    pass


class EmptyFamily(InvalidInput):
    pass


class ZeroSamples(InvalidInput):
    pass


class TooLarge(CapExceeded):
    pass


class DistinctnessViolation(TwistSumError):
    pass


class NoValidPair(TwistSumError):
    pass


class CertificateUnavailable(TwistSumError):
    pass
