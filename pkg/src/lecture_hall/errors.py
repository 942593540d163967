"""Exception types raised across the package.

Every error derives from :class:`LectureHallError`, which the CLI maps to exit
code 1 (a domain error, as opposed to a usage error).
"""


class LectureHallError(Exception):
    """Base class for domain errors."""


class NotWeaklyDecreasing(LectureHallError):
    pass


class NegativePart(LectureHallError):
    pass


class MTooSmall(LectureHallError):
    pass


class ShapeMismatch(LectureHallError):
    pass


class NonIntegerResult(LectureHallError):
    pass


class SearchSpaceTooLarge(LectureHallError):
    pass


class MalformedPathSystem(LectureHallError):
    pass


class CellOutOfShape(LectureHallError):
    pass


class NoCoalescence(LectureHallError):
    pass


class UndefinedAtX(LectureHallError):
    pass


class SingularAtX(LectureHallError):
    pass


class DegenerateDenominator(LectureHallError):
    pass


class InadmissibleProfile(LectureHallError):
    pass


class SingularKasteleyn(LectureHallError):
    pass


class CoordinateOutOfRange(LectureHallError):
    pass


class DomainBoundary(LectureHallError):
    pass


class MismatchedScene(LectureHallError):
    pass


class InvalidTableau(LectureHallError):
    pass
