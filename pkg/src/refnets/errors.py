"""Exception types shared across the toolkit."""

from __future__ import annotations


class RefnetError(Exception):
    """Base class for all toolkit errors."""


class ParseError(RefnetError):
    """Syntax error in model source, with a 1-based location."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class TypeIssue:
    """One type-check violation; a model may collect several."""

    def __init__(self, where: str, message: str, line: int = 0, col: int = 0):
        self.where = where
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        loc = f" at {self.line}:{self.col}" if self.line else ""
        return f"{self.where}{loc}: {self.message}"

    def __repr__(self) -> str:
        return f"TypeIssue({self!s})"


class ModelTypeError(RefnetError):
    """Raised when a parsed model fails the type checker."""

    def __init__(self, issues: list[TypeIssue]):
        super().__init__("; ".join(str(i) for i in issues))
        self.issues = issues


class EvalError(RefnetError):
    """Runtime failure while evaluating an expression or operator."""


class UnboundVariable(EvalError):
    pass


class DanglingPointer(EvalError):
    pass


class FiringError(RefnetError):
    """Attempt to fire a transition that is not enabled."""


class ReplayError(RefnetError):
    """A recorded trace does not replay against the engine."""


class ScriptError(RefnetError):
    """A scripted mode is not enabled (or not unique) at its step."""
