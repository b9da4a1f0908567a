"""Exception hierarchy shared across the package."""


class MvlError(Exception):
    """Base class for all errors raised by mvlsync."""


class DimensionError(MvlError, ValueError):
    """Non-conformable shapes, out-of-range indices, or a blown dimension cap."""


class ExpressionError(MvlError, ValueError):
    """Unbound variables or malformed operator arguments in a logical expression."""


class ParseError(MvlError, ValueError):
    """Syntax or validation error in network source text."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message)


class NotSynchronousError(MvlError):
    """A synchronization time was requested for a set that never synchronizes."""


class InfeasibleError(MvlError):
    """Pinning synthesis has no admissible target."""


class SynthesisError(MvlError):
    """An internal invariant of controller synthesis was violated."""
