"""Exception taxonomy shared across the library and the command line tool.

Three broad classes matter to callers: malformed input text (ParseError),
mathematically invalid requests on well-formed input (DomainError), and
requests that exceed a configured resource bound (LimitError).  The CLI
maps them to exit codes 2, 1 and 3 respectively.
"""

from __future__ import annotations


class KnitError(Exception):
    """Base class for all library errors."""


class ParseError(KnitError):
    """Input text does not conform to the expected grammar."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DomainError(KnitError):
    """Well-formed input that violates a mathematical precondition."""


class LimitError(KnitError):
    """A configured size or resource limit would be exceeded."""
