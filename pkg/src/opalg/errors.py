"""
Exception hierarchy shared by the algebra, engine, DSL and numeric packages.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """1-based (line, column) position inside a script."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class OpalgError(Exception):
    """Base class for every error raised by opalg."""


class UnresolvedCommutator(OpalgError):
    """A commutator stayed opaque where full closure was demanded."""

    def __init__(self, pair: str, span: SourceSpan | None = None) -> None:
        self.pair = pair
        self.span = span
        where = f"{span}: " if span else ""
        super().__init__(f"{where}unresolved commutator {pair}")

    def at(self, span: SourceSpan) -> UnresolvedCommutator:
        return UnresolvedCommutator(self.pair, span)


class ParseError(OpalgError):
    """Malformed script text; span points inside the offending token."""

    def __init__(self, span: SourceSpan, expected: str, found: str | None = None) -> None:
        self.span = span
        self.expected = expected
        self.found = found
        got = f", found {found!r}" if found is not None else ""
        super().__init__(f"{span}: expected {expected}{got}")


class ScriptError(OpalgError):
    """Script parsed but cannot be evaluated (e.g. unbound index at run time)."""

    def __init__(self, span: SourceSpan | None, message: str) -> None:
        self.span = span
        where = f"{span}: " if span else ""
        super().__init__(f"{where}{message}")


class GridOriginError(OpalgError):
    """Grid reaches too close to p = 0, where H^-1 and 1/p^2 are singular."""


class DegenerateTestFunction(OpalgError):
    """Test function has (numerically) zero norm on the interior points."""


class UnknownCase(OpalgError):
    """Unknown derivation or numeric case id."""


class RewriteLimitExceeded(OpalgError):
    """Relation rewriting did not settle within the step limit."""
