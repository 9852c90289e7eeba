"""
JSON-lines run records.

One record per assertion, per derivation index tuple, or per (case, level).
Absent fields are omitted; floats carry 12 significant digits so identical
flags and seed give byte-identical output.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from opalg.dsl.runner import AssertOutcome
from opalg.engine.models import IndexOutcome
from opalg.numeric.models import GridSpec, ResidualReport, ResidualRow

RecordKind = Literal["assert", "derivation", "numeric"]
RecordStatus = Literal["pass", "fail", "error"]


def _significant(x: float | None) -> float | None:
    return None if x is None else float(f"{x:.12g}")


class RunRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: RecordKind
    id: str
    status: RecordStatus
    n: int | None = None
    h: float | None = None
    residual: float | None = None
    order: float | None = None
    seed: int | None = None
    index_pair: tuple[int, ...] | None = None
    detail: str | None = Field(None, description="Normal forms, limits or the grid spec needed to reproduce")

    @field_serializer("h", "residual", "order")
    def _round(self, value: float | None) -> float | None:
        return _significant(value)

    def to_line(self) -> str:
        return self.model_dump_json(exclude_none=True)


def _status(passed: bool) -> RecordStatus:
    return "pass" if passed else "fail"


def assert_record(script_id: str, outcome: AssertOutcome) -> RunRecord:
    if outcome.status == "pass":
        detail = outcome.lhs
    elif outcome.status == "fail":
        detail = f"{outcome.lhs} != {outcome.rhs}"
    else:
        detail = outcome.message
    return RunRecord(
        kind="assert",
        id=f"{script_id}:{outcome.span}",
        status=outcome.status,
        index_pair=outcome.index,
        detail=detail,
    )


def derivation_record(case_id: str, outcome: IndexOutcome, render) -> RunRecord:
    """`render` prints an Expr; the final step's normal form goes in detail, or the first mismatch."""
    failure = outcome.first_failure
    if failure is None:
        last = outcome.steps[-1]
        detail = f"{last.label}: {render(last.lhs)}"
    else:
        detail = f"{failure.label} under {failure.axioms}: {render(failure.lhs)} != {render(failure.rhs)}"
    return RunRecord(
        kind="derivation",
        id=case_id,
        status=_status(outcome.passed),
        index_pair=outcome.index,
        detail=detail,
    )


def spec_detail(spec: GridSpec, sigma: float) -> str:
    cx, cy, cz = spec.center
    return f"center={cx:g},{cy:g},{cz:g} half_width={spec.half_width:g} sigma={sigma:g}"


def numeric_records(report: ResidualReport, spec: GridSpec, sigma: float) -> list[RunRecord]:
    records = []
    for row in report.rows:
        records.append(
            RunRecord(
                kind="numeric",
                id=report.case,
                status=_status(row.passed),
                n=row.n,
                h=row.h,
                residual=row.residual,
                order=row.order,
                seed=report.seed,
                index_pair=row.index_pair,
                detail=_row_detail(report, row, spec, sigma),
            )
        )
    return records


def _row_detail(report: ResidualReport, row: ResidualRow, spec: GridSpec, sigma: float) -> str | None:
    parts = []
    if report.detail:
        parts.append(report.detail)
    if row.limit is not None:
        parts.append(f"limit={row.limit:.12g}")
    if report.note and row is report.rows[-1]:
        parts.append(f"note={report.note!r}")
    if not row.passed:
        parts.append(spec_detail(spec, sigma))
    return " ".join(parts) or None
