"""Tests for the momentum grid, validity masks and the test-function family."""

from __future__ import annotations

import numpy as np
import pytest

from opalg.errors import DegenerateTestFunction, GridOriginError
from opalg.numeric import GridSpec, MomentumGrid, gaussian, trial_family
from opalg.numeric.grid import family_coefficients


class TestGridSpec:
    def test_spacing(self):
        spec = GridSpec(n=17, half_width=0.75)
        assert spec.h == pytest.approx(0.09375)

    def test_refined_halves_spacing(self):
        spec = GridSpec(n=17)
        assert [spec.refined(k).n for k in range(3)] == [17, 33, 65]
        assert spec.refined(2).h == pytest.approx(spec.h / 4)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            GridSpec(n=4)


class TestMomentumGrid:
    def test_origin_rejected(self):
        with pytest.raises(GridOriginError, match="singular"):
            MomentumGrid(GridSpec(n=17, center=(0.0, 0.0, 0.0)))

    def test_default_box_stays_clear_of_origin(self, small_grid):
        assert small_grid.min_momentum == pytest.approx(np.sqrt(3 * 1.25**2))

    def test_interior_excludes_boundary_layer(self, small_grid):
        assert small_grid.interior.sum() == 15**3
        assert not small_grid.interior[0].any()

    def test_derivative_exact_on_quadratics(self, small_grid):
        psi = small_grid.wave(small_grid.p[0] ** 2)
        d = small_grid.derivative(psi, 0)
        expected = 2.0 * small_grid.p[0]
        assert np.allclose(d.values[d.valid], expected[d.valid], rtol=0, atol=1e-12)

    def test_derivative_invalidates_one_layer_per_axis(self, small_grid):
        psi = small_grid.wave(np.ones_like(small_grid.p2))
        d = small_grid.derivative(psi, 0)
        assert d.valid.sum() == 13 * 15 * 15
        dd = small_grid.derivative(d, 1)
        assert dd.valid.sum() == 13 * 13 * 15

    def test_arithmetic_intersects_masks(self, small_grid):
        psi = small_grid.wave(np.ones_like(small_grid.p2))
        d = small_grid.derivative(psi, 2)
        total = psi + d
        assert total.valid.sum() == d.valid.sum()
        assert total.norm() == pytest.approx(np.sqrt(d.valid.sum()))


class TestTestFunctions:
    def test_first_member_is_the_gaussian(self, small_grid):
        family = trial_family(small_grid, seed=7, size=3)
        base = gaussian(small_grid)
        assert len(family) == 3
        assert np.array_equal(family[0].values, base.values)

    def test_family_is_seeded(self, small_grid):
        a = trial_family(small_grid, seed=3)
        b = trial_family(small_grid, seed=3)
        c = trial_family(small_grid, seed=4)
        assert all(np.array_equal(x.values, y.values) for x, y in zip(a, b))
        assert not np.array_equal(a[1].values, c[1].values)

    def test_coefficients_keep_gaussian_weight(self):
        for c in family_coefficients(seed=11, size=5):
            assert c[0] == 1.0
            assert np.all(np.abs(c[1:]) <= 0.5)

    def test_degenerate_function_rejected(self):
        # even n puts no sample within h/2 of the center
        grid = MomentumGrid(GridSpec(n=16))
        with pytest.raises(DegenerateTestFunction):
            trial_family(grid, sigma=1e-3)
