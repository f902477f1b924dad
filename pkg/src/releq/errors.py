"""Exception hierarchy.

Every validation failure raised by the library derives from
:class:`ReleqError`, which is itself a :class:`ValueError` so callers that
only care about "bad input" can catch the builtin.
"""


class ReleqError(ValueError):
    """Base class for all input-validation errors raised by releq."""


class NonSquareError(ReleqError):
    pass


class NotHermitianError(ReleqError):
    pass


class DomainError(ReleqError):
    """A matrix function was asked to act outside its domain."""


class DimMismatchError(ReleqError):
    pass


class SizeMismatchError(ReleqError):
    pass


class InvalidDistributionError(ReleqError):
    pass


class UnknownSymbolError(ReleqError):
    pass


class ZeroProbSymbolError(ReleqError):
    pass


class InvalidTypeError(ReleqError):
    pass


class EmptySetError(ReleqError):
    pass


class InvalidStateError(ReleqError):
    """Input is not a valid ket or density matrix."""


class NotBipartiteError(ReleqError):
    pass


class BadRankError(ReleqError):
    pass


class NotTracePreservingError(ReleqError):
    pass


class IncompleteEffectsError(ReleqError):
    pass


class NegativeEffectError(ReleqError):
    pass


class NonPositiveError(ReleqError):
    pass


class OutOfRangeError(ReleqError):
    pass


class NotPureError(ReleqError):
    pass


class NotTwoQubitError(ReleqError):
    pass


class TooLargeError(ReleqError):
    pass
