"""Exception hierarchy shared across the package."""

from __future__ import annotations


class MexcodeError(Exception):
    """Base class for every domain error raised by mexcode."""


class ParseError(MexcodeError):
    """Input text does not belong to the expression grammar."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class UnknownCharacter(ParseError):
    pass


class MalformedNumber(ParseError):
    pass


class UnexpectedToken(ParseError):
    pass


class UnbalancedParens(ParseError):
    pass


class EmptyExpression(ParseError):
    pass


class AmbiguousOrdering(MexcodeError):
    """Raised under the ``reject`` tie-break policy when only names can order vertices."""


class MalformedCode(MexcodeError):
    pass


class ConfigError(MexcodeError):
    pass


class TooLarge(MexcodeError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"graph has {size} vertices, oracle limit is {limit}")


class DuplicateId(MexcodeError):
    def __init__(self, entry_id: str):
        self.entry_id = entry_id
        super().__init__(f"duplicate corpus id {entry_id!r}")


class EntryParseError(MexcodeError):
    def __init__(self, entry_id: str, cause: Exception):
        self.entry_id = entry_id
        self.cause = cause
        super().__init__(f"entry {entry_id!r}: {cause}")


class IndexBuildError(MexcodeError):
    """Aggregates every bad entry found while building an index."""

    def __init__(self, errors: list[MexcodeError]):
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


class ConfigMismatch(MexcodeError):
    pass


class IndexFormatError(MexcodeError):
    pass
