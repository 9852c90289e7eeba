"""
Exact coefficients: Gaussian rational a+bi times hbar^k * c^m.

No floating point ever enters a Scalar; natural-unit evaluation (hbar = c = 1)
happens only through `to_complex`, which the numeric package calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

RationalLike = int | Fraction


def _frac(v: RationalLike) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, Rational)):
        raise TypeError(f"Scalar parts must be exact rationals, got {type(v).__name__}")
    return Fraction(v)


@dataclass(frozen=True, order=False)
class Scalar:
    """Gaussian rational (re + i*im) times hbar**hbar_exp * c**c_exp."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)
    hbar_exp: int = 0
    c_exp: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))
        # zero has a single representation: (0, 0) with zero exponents
        if self.re == 0 and self.im == 0:
            object.__setattr__(self, "hbar_exp", 0)
            object.__setattr__(self, "c_exp", 0)

    # -- constructors -------------------------------------------------------

    @classmethod
    def of(
        cls, re: RationalLike = 1, im: RationalLike = 0, hbar: int = 0, c: int = 0
    ) -> Scalar:
        return cls(Fraction(re), Fraction(im), hbar, c)

    @classmethod
    def zero(cls) -> Scalar:
        return cls()

    @classmethod
    def one(cls) -> Scalar:
        return cls(Fraction(1))

    @classmethod
    def imag_unit(cls) -> Scalar:
        return cls(Fraction(0), Fraction(1))

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_one(self) -> bool:
        return self.re == 1 and self.im == 0 and self.hbar_exp == 0 and self.c_exp == 0

    @property
    def units(self) -> tuple[int, int]:
        """(hbar_exp, c_exp): scalars merge additively only when these agree."""
        return (self.hbar_exp, self.c_exp)

    # -- arithmetic ---------------------------------------------------------

    def __mul__(self, other: Scalar) -> Scalar:
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.hbar_exp + other.hbar_exp,
            self.c_exp + other.c_exp,
        )

    def __neg__(self) -> Scalar:
        return Scalar(-self.re, -self.im, self.hbar_exp, self.c_exp)

    def add_like(self, other: Scalar) -> Scalar:
        """Sum of two scalars with the same hbar/c exponents."""
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.units != other.units:
            raise ValueError(f"cannot add {self} and {other}: different hbar/c powers")
        return Scalar(self.re + other.re, self.im + other.im, self.hbar_exp, self.c_exp)

    def inverse(self) -> Scalar:
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero Scalar")
        norm = self.re * self.re + self.im * self.im
        return Scalar(self.re / norm, -self.im / norm, -self.hbar_exp, -self.c_exp)

    def __truediv__(self, other: Scalar) -> Scalar:
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    # -- evaluation / ordering ---------------------------------------------

    def to_complex(self, hbar: float = 1.0, c: float = 1.0) -> complex:
        return complex(float(self.re), float(self.im)) * (hbar**self.hbar_exp) * (c**self.c_exp)

    def sort_key(self) -> tuple:
        return (self.hbar_exp, self.c_exp, self.re, self.im)

    def __repr__(self) -> str:
        return f"Scalar({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i, hbar^{self.hbar_exp}, c^{self.c_exp})"


ZERO = Scalar.zero()
ONE = Scalar.one()
I = Scalar.imag_unit()
HBAR = Scalar.of(hbar=1)
C = Scalar.of(c=1)
