"""Exception hierarchy shared by every stage of the pipeline."""


class AestheticsError(Exception):
    """Base class for all package errors."""


class DecodeError(AestheticsError):
    """Image bytes could not be decoded as JPEG or PNG."""


class TooSmall(DecodeError):
    """Decoded image is smaller than 3 pixels along some axis."""


class InsufficientData(AestheticsError):
    pass


class DegenerateInput(AestheticsError):
    """A statistic is undefined for the given input (e.g. constant data)."""


class DegenerateInputWarning(UserWarning):
    pass


class LayoutMismatch(AestheticsError):
    """Feature layout of a model differs from the extractor's layout."""


class ParseError(AestheticsError):
    pass


class ValidationError(AestheticsError):
    pass


class MissingTruth(AestheticsError):
    pass


class MissingJoin(AestheticsError):
    pass
