"""Exception types raised by grasspack."""


class GrassPackError(ValueError):
    """Base class for validation failures."""


class RankDeficient(GrassPackError):
    pass


class DimensionMismatch(GrassPackError):
    pass


class PoleCrossed(GrassPackError):
    """A pairwise distance reached the potential's pole ``A``."""


class NotComplementClosed(GrassPackError):
    pass


class NotConferenceMatrix(GrassPackError):
    pass


class ParseError(GrassPackError):
    pass


class NotOrthonormal(GrassPackError):
    pass


class CountMismatch(ParseError):
    pass


class NegativeEigenvalueWarning(UserWarning):
    """Distance set is not isometrically embeddable in Euclidean space."""
