"""Exception hierarchy. Every error raised by the library derives from ``CatMeasError``."""


class CatMeasError(ValueError):
    pass


# measurable spaces and maps
class DuplicatePoint(CatMeasError):
    pass


class UnknownPoint(CatMeasError):
    pass


class OverlappingAtoms(CatMeasError):
    pass


class UncoveredPoint(CatMeasError):
    pass


class EmptyAtom(CatMeasError):
    pass


class NotAnEvent(CatMeasError):
    pass


class NotMeasurable(CatMeasError):
    pass


class SpaceMismatch(CatMeasError):
    pass


# operators
class NotSquare(CatMeasError):
    pass


class NotHermitian(CatMeasError):
    pass


class NotAnEffect(CatMeasError):
    pass


class NotPSD(CatMeasError):
    pass


class TraceNotOne(CatMeasError):
    pass


class DimMismatch(CatMeasError):
    pass


class NonRealTrace(CatMeasError):
    pass


class EigensolverFailure(CatMeasError):
    pass


# measures and transformations
class NotNormalized(CatMeasError):
    pass


class NotAMeasure(CatMeasError):
    """Raised when an assignment of atom values is not a probability measure.

    ``values`` holds the offending atom values; ``path`` is set by the
    naturality-square checker to say which side of the square produced them.
    """

    def __init__(self, message, values=None, path=None):
        super().__init__(message)
        self.values = values
        self.path = path


class NoComposablePair(CatMeasError):
    pass


class DecompositionNotSubunital(CatMeasError):
    pass


class DecompositionTooLarge(CatMeasError):
    pass


# reconstruction
class StatesEqual(CatMeasError):
    pass


class NotAState(CatMeasError):
    pass


class SingularFrame(CatMeasError):
    pass


class ConfigInvalid(CatMeasError):
    pass
