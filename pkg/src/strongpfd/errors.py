"""Exception types shared across the package."""

from __future__ import annotations


class GraphError(Exception):
    """Base class for all errors raised by this package."""


class GraphInputError(GraphError):
    """A caller violated a documented precondition (bad vertex, empty set, ...)."""


class FormatError(GraphError):
    """Malformed textual input (edge lists, generator specs, graph6 strings)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotThinError(GraphInputError):
    """An operation that requires a thin graph was handed a non-thin one."""


class EmptyBackboneError(GraphError):
    """The backbone of the graph is empty; callers fall back per their policy."""


class InternalInvariantError(GraphError):
    """A built-in verification step failed; indicates a bug, not bad input."""
