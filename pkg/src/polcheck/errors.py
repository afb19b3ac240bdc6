"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class PolcheckError(Exception):
    """Base class. ``code`` is a stable machine-readable tag used in reports."""

    code = "error"

    def __init__(self, message: str, pos: tuple[int, int] | None = None, code: str | None = None):
        super().__init__(message)
        self.message = message
        self.pos = pos
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        if self.pos is None:
            return self.message
        line, col = self.pos
        return f"{line}:{col}: {self.message}"


class ParseError(PolcheckError):
    code = "syntax"


class ScopeError(PolcheckError):
    code = "scope"


class CheckError(PolcheckError):
    code = "type"


class IllFormedQuery(PolcheckError, ValueError):
    """Raised when a kernel operation is applied outside its precondition."""

    code = "ill-formed"


class MergeConflict(CheckError):
    code = "merge-conflict"

    def __init__(self, name: str, left, right, pos=None):
        from .kernel import show_type

        super().__init__(
            f"variable {name} is used at incompatible types {show_type(left)} and {show_type(right)}",
            pos,
        )
        self.name = name
        self.left = left
        self.right = right
