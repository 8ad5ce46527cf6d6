"""Exception hierarchy for the ebk package."""


class EbkError(Exception):
    """Base class for every error raised by ebk."""


class InvalidInputError(EbkError, ValueError):
    """Malformed arguments: wrong shapes, non-finite entries, bad indices."""


class NormalizationError(InvalidInputError):
    """A state or coefficient matrix does not have unit norm."""


class DimensionOrderError(InvalidInputError):
    """The construction needs d <= d' and got the opposite."""


class InvalidDimensionError(InvalidInputError):
    """A party dimension is too small for the requested Schmidt number."""


class DegenerateCoefficientError(EbkError, ValueError):
    """A coefficient matrix has a zero entry where the rank argument needs one."""


class DispatchError(EbkError):
    """A routine was called on the wrong construction path."""


class UnsupportedConstructionError(EbkError):
    """The requested basis family is not reachable by the implemented constructions."""


class TilingNotFoundError(EbkError):
    """The exact-cover search exhausted without covering the corner grid."""
