"""
Centralized configuration for opalg.

All environment variable reads happen here. Other modules import from this module
instead of reading os.environ directly, ensuring consistent defaults and a single
source of truth. There are no configuration files; CLI flags override these defaults.
"""

from __future__ import annotations

import os


def _float_env(key: str, default: str) -> float:
    return float(os.environ.get(key, default))


def _int_env(key: str, default: str) -> int:
    return int(os.environ.get(key, default))


def _vector_env(key: str, default: str) -> tuple[float, float, float]:
    parts = [p.strip() for p in os.environ.get(key, default).split(",") if p.strip()]
    if len(parts) != 3:
        raise ValueError(f"{key} must hold three comma-separated numbers, got {parts!r}")
    x, y, z = (float(p) for p in parts)
    return (x, y, z)


# ---------------------------------------------------------------------------
# Observability
# ---------------------------------------------------------------------------
LOG_FORMAT: str = os.environ.get("OPALG_LOG_FORMAT", "text")  # "text" or "json"
LOG_LEVEL: str = os.environ.get("OPALG_LOG_LEVEL", "WARNING").upper()

# ---------------------------------------------------------------------------
# Reproducibility / fan-out
# ---------------------------------------------------------------------------
DEFAULT_SEED: int = _int_env("OPALG_DEFAULT_SEED", "0")
WORKERS: int = max(1, _int_env("OPALG_WORKERS", "4"))

# ---------------------------------------------------------------------------
# Momentum grid (natural units hbar = c = 1)
# ---------------------------------------------------------------------------
GRID_N: int = _int_env("OPALG_GRID_N", "33")
GRID_HALF_WIDTH: float = _float_env("OPALG_GRID_HALF_WIDTH", "0.75")
GRID_CENTER: tuple[float, float, float] = _vector_env("OPALG_GRID_CENTER", "2,2,2")
MIN_MOMENTUM: float = _float_env("OPALG_MIN_MOMENTUM", "0.5")

# Test functions: Gaussian width, plane-wave vector, family size (base + seeded)
SIGMA: float = _float_env("OPALG_SIGMA", "0.25")
PLANE_WAVE: tuple[float, float, float] = _vector_env("OPALG_PLANE_WAVE", "0.3,-0.2,0.5")
FAMILY_SIZE: int = max(1, _int_env("OPALG_FAMILY_SIZE", "3"))

# Massive contrast: m c^2 in natural units
MASS_ENERGY: float = _float_env("OPALG_MASS_ENERGY", "1.0")

# ---------------------------------------------------------------------------
# Tolerance policy
# ---------------------------------------------------------------------------
EXACT_TOLERANCE: float = _float_env("OPALG_EXACT_TOLERANCE", "1e-12")
ORDER_MIN: float = _float_env("OPALG_ORDER_MIN", "1.7")
ORDER_MAX: float = _float_env("OPALG_ORDER_MAX", "2.3")
# Single-level pass for vanishing cases: residual <= constant * h^2, per case.
# massless-cr and massive-cr sit about 1.5x above the constants measured with
# the default family on the default box.
H2_CONSTANTS: dict[str, float] = {
    "massless-cr": _float_env("OPALG_H2_MASSLESS_CR", "4.0"),
    "massless-qv": _float_env("OPALG_H2_MASSLESS_QV", "6.0"),
    "heisenberg": _float_env("OPALG_H2_HEISENBERG", "8.0"),
    "massive-cr": _float_env("OPALG_H2_MASSIVE_CR", "12.0"),
}
# Finest-level residual a convergence study is expected to reach; a miss is
# reported with the result but does not fail it (the fitted orders do)
FINEST_TARGET: float = _float_env("OPALG_FINEST_TARGET", "1e-3")
# Expected-nonzero cases: relative distance to the analytic limit
LIMIT_TOLERANCE: float = _float_env("OPALG_LIMIT_TOLERANCE", "0.05")
CROSS_ORACLE_FACTOR: float = _float_env("OPALG_CROSS_ORACLE_FACTOR", "10.0")
CROSS_ORACLE_COUNT: int = _int_env("OPALG_CROSS_ORACLE_COUNT", "24")
