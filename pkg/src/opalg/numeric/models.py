"""
Grid specification and residual reports for the momentum-space lab.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from opalg import config

CaseKind = Literal["vanishing", "exact", "expected-nonzero", "cross-oracle"]


class GridSpec(BaseModel):
    """
    Cubic momentum grid: n points per axis on [center - half_width, center + half_width].
    Natural units (hbar = c = 1). Validity of the origin exclusion is checked by
    MomentumGrid, which raises GridOriginError.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(default=config.GRID_N, ge=8, description="Points per axis")
    center: tuple[float, float, float] = Field(default=config.GRID_CENTER, description="Box center in momentum space")
    half_width: float = Field(default=config.GRID_HALF_WIDTH, gt=0.0, description="Half side length of the box")
    exclusion: int = Field(default=1, ge=1, description="Boundary layer (points) excluded from norms")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    def refined(self, level: int) -> GridSpec:
        """Same box with spacing h / 2**level (n -> (n - 1) * 2**level + 1)."""
        return self.model_copy(update={"n": (self.n - 1) * 2**level + 1})


class ResidualRow(BaseModel):
    """One grid level of a case."""

    model_config = ConfigDict(extra="forbid")

    n: int
    h: float
    residual: float = Field(..., description="max over index pairs and test functions of ||(LHS - RHS) psi|| / ||psi||")
    order: float | None = Field(None, description="log2(r(h) / r(h/2)) against the next finer level")
    limit: float | None = Field(None, description="Analytic value the residual should approach (expected-nonzero cases)")
    bound: float | None = Field(None, description="Acceptance bound on the residual at this level")
    index_pair: tuple[int, ...] | None = Field(None, description="Index tuple attaining the residual")
    passed: bool = True


class ResidualReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    case: str
    kind: CaseKind
    seed: int
    rows: list[ResidualRow] = Field(default_factory=list)
    passed: bool = False
    detail: str | None = None
    note: str | None = Field(None, description="Shortfall worth reporting that does not decide pass/fail")
