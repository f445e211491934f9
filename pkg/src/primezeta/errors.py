"""Exception hierarchy shared by every module.

Anything derived from :class:`DomainError` is a caller error (bad argument,
point outside the supported region); the CLI maps those to exit code 2.
"""


class PrimeZetaError(Exception):
    """Base class for all package errors."""


class DomainError(PrimeZetaError, ValueError):
    """Argument outside the domain where the computation is defined."""


class ParseError(DomainError):
    """Malformed decimal literal."""


class OutOfRangeError(DomainError):
    """Query beyond the extent of a precomputed table."""


class UnsupportedOrderError(DomainError):
    """Requested index is beyond what the implementation supports."""


class DataIntegrityError(PrimeZetaError):
    """A bundled data file failed its integrity check."""
