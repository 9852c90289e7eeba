"""
Symbolic-differentiation oracle (sympy).

Certifies the photon position realization before the lab relies on it and
supplies analytic fields for expected-nonzero cases and for checking the
stencil against exact derivatives.
"""

from __future__ import annotations

import functools
import itertools
import logging
from collections.abc import Callable

import numpy as np
import sympy as sp

logger = logging.getLogger(__name__)

p1, p2, p3 = sp.symbols("p1 p2 p3", real=True)
MOMENTA = (p1, p2, p3)
P_SQUARED = p1**2 + p2**2 + p3**2

Field = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _photon_position(i: int, f: sp.Expr) -> sp.Expr:
    return sp.I * sum(MOMENTA[i] * MOMENTA[k] / P_SQUARED * sp.diff(f, MOMENTA[k]) for k in range(3))


def _energy(mass: float) -> sp.Expr:
    return sp.sqrt(P_SQUARED + sp.nsimplify(mass) ** 2)


@functools.lru_cache(maxsize=None)
def certify_photon_position() -> bool:
    """[Q_i, p_j] f = i p_i p_j / p^2 f for a generic f, all i, j."""
    f = sp.Function("f")(*MOMENTA)
    for i, j in itertools.product(range(3), repeat=2):
        pj = MOMENTA[j]
        lhs = _photon_position(i, pj * f) - pj * _photon_position(i, f)
        if sp.simplify(lhs - sp.I * MOMENTA[i] * pj / P_SQUARED * f) != 0:
            logger.warning("photon position fails [Q_%d, P_%d]", i + 1, j + 1)
            return False
    return True


@functools.lru_cache(maxsize=None)
def certify_velocity_constant() -> bool:
    """[Q_i, V_j] = 0 for the photon position and V_j = p_j / |p|."""
    for i, j in itertools.product(range(3), repeat=2):
        v = MOMENTA[j] / sp.sqrt(P_SQUARED)
        # [Q_i, V_j] acts as i sum_k (p_i p_k / p^2) dV_j/dp_k
        if sp.simplify(_photon_position(i, v)) != 0:
            return False
    return True


def _lambdify(expr: sp.Expr) -> Field:
    fn = sp.lambdify(MOMENTA, expr, "numpy")
    return lambda a, b, c: np.broadcast_to(fn(a, b, c), np.shape(a))


@functools.lru_cache(maxsize=None)
def massive_velocity_gradient(mass: float) -> dict[tuple[int, int], Field]:
    """d(p_j / E)/dp_i with E = sqrt(p^2 + m^2): [Q_canonical_i, V_j] acts as i times this."""
    e = _energy(mass)
    return {
        (i + 1, j + 1): _lambdify(sp.simplify(sp.diff(MOMENTA[j] / e, MOMENTA[i])))
        for i, j in itertools.product(range(3), repeat=2)
    }


@functools.lru_cache(maxsize=None)
def massive_speed_defect(mass: float) -> Field:
    """sum_j (p_j / E)^2 - 1 = -m^2 / E^2."""
    e = _energy(mass)
    return _lambdify(sp.simplify(sum((p / e) ** 2 for p in MOMENTA) - 1))


def gaussian_expr(
    center: tuple[float, float, float],
    sigma: float,
    plane_wave: tuple[float, float, float],
) -> sp.Expr:
    r2 = sum((MOMENTA[k] - sp.nsimplify(center[k])) ** 2 for k in range(3))
    phase = sum(sp.nsimplify(plane_wave[k]) * MOMENTA[k] for k in range(3))
    return sp.exp(-r2 / (2 * sp.nsimplify(sigma) ** 2)) * sp.exp(sp.I * phase)


def photon_position_of_gaussian(
    i: int,
    center: tuple[float, float, float],
    sigma: float,
    plane_wave: tuple[float, float, float],
) -> Field:
    """Exact Q_photon_i applied to the default Gaussian, as a numpy field."""
    return _lambdify(_photon_position(i - 1, gaussian_expr(center, sigma, plane_wave)))
