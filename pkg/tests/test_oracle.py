"""Tests for the sympy differentiation oracle."""

from __future__ import annotations

import numpy as np
import pytest

from opalg.numeric import oracle


def test_photon_position_certified():
    assert oracle.certify_photon_position() is True


def test_velocity_constant_certified():
    assert oracle.certify_velocity_constant() is True


class TestMassiveFields:
    def test_velocity_gradient_values(self):
        fields = oracle.massive_velocity_gradient(1.0)
        p = (np.array([1.0]), np.array([0.0]), np.array([0.0]))
        # d(p_j/E)/dp_i = delta_ij / E - p_i p_j / E^3 with E = sqrt(2)
        assert fields[(1, 1)](*p)[0] == pytest.approx(1 / (2 * np.sqrt(2)))
        assert fields[(2, 2)](*p)[0] == pytest.approx(1 / np.sqrt(2))
        assert fields[(1, 2)](*p)[0] == pytest.approx(0.0)

    def test_speed_defect(self):
        defect = oracle.massive_speed_defect(1.0)
        p = (np.array([1.0, 0.0]), np.array([0.0, 2.0]), np.array([0.0, 0.0]))
        assert defect(*p) == pytest.approx([-0.5, -0.2])

    def test_fields_broadcast_to_grid_shape(self, small_grid):
        field = oracle.massive_speed_defect(1.0)(*small_grid.p)
        assert field.shape == small_grid.p2.shape
