"""Exception types shared across the package."""


class FptoolError(Exception):
    """Base class for all errors raised by fptool."""


class ParseError(FptoolError, ValueError):
    """Malformed polynomial or job-file text.

    ``position`` is the 0-based character offset of the offending token
    (or ``None`` when the error is not tied to a single location).
    """

    def __init__(self, message, position=None, source=None):
        self.message = message
        self.position = position
        self.source = source
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where}")


class RingMismatchError(FptoolError, ValueError):
    """Operands live in different rings."""


class PreconditionError(FptoolError, ValueError):
    """An operation was called outside its domain."""


class ResourceCeilingError(FptoolError, RuntimeError):
    """A configured size limit was exceeded (e.g. ideal-power generators)."""
