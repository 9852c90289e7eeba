"""Tests for exact Scalar coefficients."""

from __future__ import annotations

from fractions import Fraction

import pytest

from opalg.algebra import C, HBAR, I, ONE, ZERO, Scalar


class TestScalarArithmetic:
    def test_i_squared_folds_into_rational_pair(self):
        assert I * I == Scalar.of(-1)

    def test_units_multiply(self):
        s = I * HBAR * C * C
        assert s == Scalar.of(0, 1, hbar=1, c=2)
        assert s.units == (1, 2)

    def test_gaussian_product(self):
        a = Scalar.of(1, 2)
        b = Scalar.of(3, -1)
        assert a * b == Scalar.of(5, 5)

    def test_inverse(self):
        s = Scalar.of(1, 1, hbar=1, c=-2)
        assert s * s.inverse() == ONE
        assert s.inverse() == Scalar.of(Fraction(1, 2), Fraction(-1, 2), hbar=-1, c=2)

    def test_division(self):
        assert (I * HBAR) / HBAR == I

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            ZERO.inverse()

    def test_add_like(self):
        assert Scalar.of(1, hbar=1).add_like(Scalar.of(2, 3, hbar=1)) == Scalar.of(3, 3, hbar=1)

    def test_add_like_mismatched_units(self):
        with pytest.raises(ValueError, match="different hbar/c powers"):
            HBAR.add_like(C)

    def test_add_like_zero_is_neutral(self):
        assert ZERO.add_like(HBAR) == HBAR
        assert HBAR.add_like(ZERO) == HBAR

    def test_negation(self):
        assert -Scalar.of(2, -3, c=1) == Scalar.of(-2, 3, c=1)


class TestScalarInvariants:
    def test_zero_has_single_representation(self):
        assert Scalar.of(0, 0, hbar=3, c=-1) == ZERO
        assert Scalar.of(0, hbar=1).units == (0, 0)

    def test_floats_rejected(self):
        with pytest.raises(TypeError, match="exact rationals"):
            Scalar(0.5)

    def test_bools_rejected(self):
        with pytest.raises(TypeError):
            Scalar(True)

    def test_predicates(self):
        assert ONE.is_one and not HBAR.is_one
        assert ZERO.is_zero and not I.is_zero

    def test_to_complex_natural_units(self):
        s = Scalar.of(Fraction(1, 2), 2, hbar=1, c=2)
        assert s.to_complex() == complex(0.5, 2.0)
        assert s.to_complex(hbar=2.0, c=3.0) == complex(0.5, 2.0) * 18.0
