"""
Momentum grid, sampled wave functions and seeded test functions.

A WaveFunction carries a validity mask: the exclusion layer starts invalid,
and every central difference invalidates one more layer along its axis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from opalg import config
from opalg.errors import DegenerateTestFunction, GridOriginError
from opalg.numeric.models import GridSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    values: np.ndarray
    valid: np.ndarray

    def __add__(self, other: WaveFunction) -> WaveFunction:
        valid = self.valid & other.valid
        return WaveFunction(np.where(valid, self.values + other.values, 0.0), valid)

    def __sub__(self, other: WaveFunction) -> WaveFunction:
        valid = self.valid & other.valid
        return WaveFunction(np.where(valid, self.values - other.values, 0.0), valid)

    def scale(self, alpha: complex) -> WaveFunction:
        return WaveFunction(self.values * alpha, self.valid)

    def multiply(self, field: np.ndarray) -> WaveFunction:
        return WaveFunction(self.values * field, self.valid)

    def norm(self, mask: np.ndarray | None = None) -> float:
        m = self.valid if mask is None else mask & self.valid
        return float(np.sqrt(np.sum(np.abs(self.values[m]) ** 2)))


class MomentumGrid:
    """Sample points p = (p1, p2, p3) of a GridSpec, shape (n, n, n), 'ij' indexing."""

    def __init__(self, spec: GridSpec) -> None:
        self.spec = spec
        self.h = spec.h
        self.axes = tuple(c + np.linspace(-spec.half_width, spec.half_width, spec.n) for c in spec.center)
        # grid is separable, so the smallest |p| takes the smallest |p_k| per axis
        self.min_momentum = float(np.sqrt(sum(np.min(np.abs(a)) ** 2 for a in self.axes)))
        if self.min_momentum < config.MIN_MOMENTUM:
            raise GridOriginError(
                f"grid reaches |p| = {self.min_momentum:.4g} < {config.MIN_MOMENTUM}; "
                "H^-1 and 1/p^2 are singular at the origin"
            )
        self.p = np.meshgrid(*self.axes, indexing="ij")
        self.p2 = self.p[0] ** 2 + self.p[1] ** 2 + self.p[2] ** 2
        self.norm_p = np.sqrt(self.p2)
        e = spec.exclusion
        mask = np.zeros((spec.n,) * 3, dtype=bool)
        mask[e:-e, e:-e, e:-e] = True
        self.interior = mask
        self._fields: dict[tuple, np.ndarray] = {}

    def field(self, key: tuple, build) -> np.ndarray:
        """Cached multiplier field."""
        if key not in self._fields:
            self._fields[key] = build()
        return self._fields[key]

    def energy(self, mass: float = 0.0) -> np.ndarray:
        """H(p) = sqrt(p^2 + m^2) (c = 1); |p| when massless."""
        if mass == 0.0:
            return self.norm_p
        return self.field(("E", mass), lambda: np.sqrt(self.p2 + mass**2))

    def wave(self, values: np.ndarray) -> WaveFunction:
        return WaveFunction(np.asarray(values, dtype=complex), self.interior.copy())

    def derivative(self, psi: WaveFunction, axis: int) -> WaveFunction:
        """Second-order central difference d/dp_axis (axis 0..2)."""
        f, v = psi.values, psi.valid
        out = np.zeros_like(f)
        valid = np.zeros_like(v)
        inner = [slice(None)] * 3
        fwd = [slice(None)] * 3
        back = [slice(None)] * 3
        inner[axis], fwd[axis], back[axis] = slice(1, -1), slice(2, None), slice(None, -2)
        inner_t, fwd_t, back_t = tuple(inner), tuple(fwd), tuple(back)
        out[inner_t] = (f[fwd_t] - f[back_t]) / (2.0 * self.h)
        valid[inner_t] = v[fwd_t] & v[back_t] & v[inner_t]
        return WaveFunction(np.where(valid, out, 0.0), valid)


# ---------------------------------------------------------------------------
# Test functions
# ---------------------------------------------------------------------------


def gaussian(
    grid: MomentumGrid,
    sigma: float = config.SIGMA,
    plane_wave: tuple[float, float, float] = config.PLANE_WAVE,
    center: tuple[float, float, float] | None = None,
) -> WaveFunction:
    """exp(-|p - p0|^2 / (2 sigma^2)) * exp(i a.p), p0 the grid center by default."""
    p0 = center or grid.spec.center
    r2 = sum((grid.p[k] - p0[k]) ** 2 for k in range(3))
    phase = sum(plane_wave[k] * grid.p[k] for k in range(3))
    return grid.wave(np.exp(-r2 / (2.0 * sigma**2)) * np.exp(1j * phase))


def family_coefficients(seed: int, size: int) -> list[np.ndarray]:
    """Polynomial coefficients (1, x, y, z, xy, yz, zx) per seeded family member."""
    rng = np.random.default_rng(seed)
    coeffs = [np.array([1.0, 0, 0, 0, 0, 0, 0])]
    for _ in range(size - 1):
        c = rng.uniform(-0.5, 0.5, size=7)
        c[0] = 1.0
        coeffs.append(c)
    return coeffs


def trial_family(
    grid: MomentumGrid,
    seed: int = config.DEFAULT_SEED,
    size: int = config.FAMILY_SIZE,
    sigma: float = config.SIGMA,
    plane_wave: tuple[float, float, float] = config.PLANE_WAVE,
) -> list[WaveFunction]:
    """The default Gaussian plus seeded low-order-polynomial x Gaussian members."""
    base = gaussian(grid, sigma, plane_wave)
    x, y, z = ((grid.p[k] - grid.spec.center[k]) / sigma for k in range(3))
    monomials = (1.0, x, y, z, x * y, y * z, z * x)
    family = []
    for c in family_coefficients(seed, size):
        poly = sum(ck * m for ck, m in zip(c, monomials))
        psi = base.multiply(poly)
        if psi.norm(grid.interior) < 1e-12:
            raise DegenerateTestFunction(f"test function with coefficients {c.tolist()} vanishes on the grid")
        family.append(psi)
    logger.debug("test family: %d functions on n=%d (seed %d)", len(family), grid.spec.n, seed)
    return family
