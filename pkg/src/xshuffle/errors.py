"""Exception types shared across the package."""


class XShuffleError(Exception):
    """Base class for errors raised by this package."""


class ParseError(XShuffleError, ValueError):
    """Malformed cycle notation or word literal."""


class CapExceeded(XShuffleError):
    """An enumeration or recursion cap would be exceeded."""


class QueryError(XShuffleError, ValueError):
    """A count query whose target does not fit its kind or support."""


class InvariantFailure(XShuffleError, AssertionError):
    """Two independent computations disagreed."""
