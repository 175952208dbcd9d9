"""Exception hierarchy."""


class KCycleError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(KCycleError, ValueError):
    """Malformed instance file. ``line`` is 1-based, or None."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class HeaderError(ParseError):
    pass


class RangeError(ParseError):
    pass


class LoopError(ParseError):
    pass


class DuplicateEdgeError(ParseError):
    pass


class DuplicateTerminalError(ParseError):
    pass


class CountError(ParseError):
    pass


class SingularBlockError(KCycleError, ArithmeticError):
    """The trailing block of a matrix had no full set of pivots."""


class RetriesExhaustedError(KCycleError, RuntimeError):
    pass


class FormatError(KCycleError, ValueError):
    """Malformed compressed-instance file."""
