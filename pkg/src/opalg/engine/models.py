"""
Replay result types: one StepOutcome per checked identity, grouped per index tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from opalg.algebra import Expr


@dataclass(frozen=True)
class StepOutcome:
    """A single identity lhs == rhs checked under one axiom set."""

    label: str
    axioms: str
    lhs: Expr
    rhs: Expr
    passed: bool


@dataclass(frozen=True)
class IndexOutcome:
    """All steps of a derivation for one index tuple (i,) or (i, j)."""

    index: tuple[int, ...]
    steps: tuple[StepOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps)

    @property
    def first_failure(self) -> StepOutcome | None:
        return next((s for s in self.steps if not s.passed), None)


@dataclass
class CheckResult:
    """Replay of one derivation over every index tuple."""

    derivation_id: str
    axioms: str
    outcomes: list[IndexOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    @property
    def passed_count(self) -> int:
        return sum(1 for o in self.outcomes if o.passed)

    @property
    def total(self) -> int:
        return len(self.outcomes)

    @property
    def first_failure(self) -> IndexOutcome | None:
        """First failing index tuple in lexicographic order (carries both normal forms)."""
        return next((o for o in self.outcomes if not o.passed), None)

    @property
    def summary(self) -> str:
        return f"{self.passed_count}/{self.total}"
