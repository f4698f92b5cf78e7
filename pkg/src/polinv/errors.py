"""Exception types shared across the package."""

from __future__ import annotations


class PolinvError(Exception):
    """Base class for errors raised by this package."""


class ResourceBoundError(PolinvError):
    """An enumeration or closure would exceed a configured resource cap."""


class ParseError(PolinvError, ValueError):
    """Malformed input text, with source position when one is known."""

    def __init__(
        self,
        message: str,
        *,
        source: str | None = None,
        line: int | None = None,
        column: int | None = None,
    ) -> None:
        self.message = message
        self.source = source
        self.line = line
        self.column = column
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        if where:
            where += " "
        super().__init__(where + message)
