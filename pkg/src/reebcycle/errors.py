"""Exception types shared across the package (mapped to CLI exit codes)."""
from __future__ import annotations


class PreconditionError(ValueError):
    """Input violates an operation's precondition."""


class ParseError(ValueError):
    """Malformed input text; carries the file, line number and offending token."""

    def __init__(self, message: str, source: str = "<text>", line: int = 0, token: str = ""):
        self.source, self.line, self.token = source, line, token
        where = f"{source}:{line}" if line else source
        tok = f" near {token!r}" if token else ""
        super().__init__(f"{where}: {message}{tok}")
