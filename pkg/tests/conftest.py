"""Shared pytest fixtures for opalg tests."""

from __future__ import annotations

from pathlib import Path

import pytest

from opalg.engine import LEIBNIZ, MASSIVE, MASSLESS, AxiomSet
from opalg.numeric import GridSpec, MomentumGrid

SCRIPTS_DIR = Path(__file__).resolve().parent.parent / "scripts"


@pytest.fixture()
def massless() -> AxiomSet:
    """Full Massless set: Heisenberg, constant velocity, commuting H/P/V, V = c^2 H^-1 P."""
    return MASSLESS


@pytest.fixture()
def massive() -> AxiomSet:
    """Massive set: canonical [Q_i, P_j] plus the Heisenberg equation and V definition."""
    return MASSIVE


@pytest.fixture()
def leibniz() -> AxiomSet:
    """Heisenberg equation only; [Q_i, V_j] stays opaque."""
    return LEIBNIZ


@pytest.fixture()
def scripts_dir() -> Path:
    return SCRIPTS_DIR


@pytest.fixture()
def small_spec() -> GridSpec:
    """Coarse default box (n=17), fast enough for per-test grids."""
    return GridSpec(n=17)


@pytest.fixture()
def small_grid(small_spec: GridSpec) -> MomentumGrid:
    return MomentumGrid(small_spec)


@pytest.fixture()
def write_script(tmp_path: Path):
    """Write script text to a temporary .oad file and return its path."""

    def _write(text: str, name: str = "script.oad") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
