"""Exception types shared across the package."""


class SemitoricError(Exception):
    """Base class for all package errors."""


class MixedDiscriminantError(SemitoricError, ValueError):
    """Two quadratic scalars with different discriminants were combined."""


class DegenerateInputError(SemitoricError, ValueError):
    """Input violates a documented precondition (zero matrix, dependent basis, ...)."""


class UnsupportedRankError(SemitoricError, ValueError):
    """Cone facet enumeration was requested above the supported ambient rank."""


class RequiresRationalConeError(SemitoricError, ValueError):
    """Operation needs rational generators but an irrational cone was supplied."""


class ResourceBoundError(SemitoricError, RuntimeError):
    """A search exceeded its configured bound; raising is preferred to silence."""


class NotUnipotentError(SemitoricError, ValueError):
    """A monodromy operator is not unipotent; message names the obstruction."""


class GroupMismatchError(SemitoricError, ValueError):
    """Two decompositions carry different symmetry group generators."""


class FormatError(SemitoricError, ValueError):
    """A JSON document does not match the expected schema; message carries the path."""
