"""Period lattices of flat tori and the binary quadratic forms of their Fourier modes.

Scalars are either :class:`fractions.Fraction` (exact backend) or ``float``.
A lattice picks one backend for all four period components and every
quantity derived from it inherits that backend.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import DegenerateLattice, NonPositiveDefinite

Scalar = Union[Fraction, float]

DEFAULT_TOL = 1e-9

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class Variant(str, enum.Enum):
    """Which quadratic form indexes the Fourier modes."""

    PAPER = "paper"
    DUAL = "dual"


def to_scalar(value, exact: bool) -> Scalar:
    if exact:
        if isinstance(value, float):
            raise TypeError(f"float {value!r} cannot enter the exact backend")
        return Fraction(value)
    return float(value)


def is_exact(value) -> bool:
    return isinstance(value, Rational)


def scalar_str(value: Scalar) -> str:
    """Render a scalar as ``"p/q"`` (exact) or ``repr`` of the float."""
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`scalar_str`; decimal syntax yields a float."""
    text = text.strip()
    if _RATIONAL.match(text):
        return Fraction(text)
    return float(text)


@dataclass(frozen=True)
class TorusLattice:
    """Periods ``omega1 = w1x + i w1y`` and ``omega2 = w2x + i w2y``."""

    w1x: Scalar
    w1y: Scalar
    w2x: Scalar
    w2y: Scalar
    exact: bool
    tol: float = DEFAULT_TOL

    @property
    def omega1(self) -> complex:
        return complex(float(self.w1x), float(self.w1y))

    @property
    def omega2(self) -> complex:
        return complex(float(self.w2x), float(self.w2y))

    @property
    def cross(self) -> Scalar:
        """Signed area ``w1x*w2y - w1y*w2x`` of the fundamental parallelogram."""
        return self.w1x * self.w2y - self.w1y * self.w2x

    @property
    def dot(self) -> Scalar:
        return self.w1x * self.w2x + self.w1y * self.w2y

    @property
    def norm1_sq(self) -> Scalar:
        return self.w1x * self.w1x + self.w1y * self.w1y

    @property
    def norm2_sq(self) -> Scalar:
        return self.w2x * self.w2x + self.w2y * self.w2y

    @property
    def area(self) -> Scalar:
        return abs(self.cross)

    @property
    def wronskian(self) -> complex:
        """``conj(omega2)*omega1 - omega2*conj(omega1)``, which equals ``-2i * cross``."""
        return complex(0.0, -2.0 * float(self.cross))

    @property
    def wronskian_abs(self) -> Scalar:
        return 2 * abs(self.cross)

    @property
    def angle(self) -> float:
        """Angle between the periods, in (0, pi)."""
        cos = float(self.dot) / math.sqrt(float(self.norm1_sq) * float(self.norm2_sq))
        return math.acos(max(-1.0, min(1.0, cos)))

    @property
    def is_rectangular(self) -> bool:
        if self.exact:
            return self.dot == 0
        scale = math.sqrt(float(self.norm1_sq) * float(self.norm2_sq))
        return abs(float(self.dot)) <= self.tol * scale

    def scaled(self, c: complex | tuple) -> "TorusLattice":
        """Lattice of ``c * omega1, c * omega2``; ``c`` may be an exact pair ``(re, im)``."""
        if isinstance(c, tuple):
            cr, ci = (to_scalar(v, self.exact) for v in c)
        else:
            if self.exact:
                raise TypeError("pass an exact (re, im) pair to scale an exact lattice")
            cr, ci = c.real, c.imag
        return TorusLattice(
            cr * self.w1x - ci * self.w1y,
            cr * self.w1y + ci * self.w1x,
            cr * self.w2x - ci * self.w2y,
            cr * self.w2y + ci * self.w2x,
            self.exact,
            self.tol,
        )

    def change_basis(self, p: int, q: int, r: int, s: int) -> "TorusLattice":
        """Lattice with basis ``(p*omega1 + q*omega2, r*omega1 + s*omega2)``; requires ``ps - qr = +-1``."""
        if p * s - q * r not in (1, -1):
            raise ValueError("basis change must be unimodular")
        return TorusLattice(
            p * self.w1x + q * self.w2x,
            p * self.w1y + q * self.w2y,
            r * self.w1x + s * self.w2x,
            r * self.w1y + s * self.w2y,
            self.exact,
            self.tol,
        )


def _components(omega) -> tuple:
    if isinstance(omega, complex):
        return omega.real, omega.imag
    if isinstance(omega, (int, float, Fraction)):
        return omega, 0
    re, im = omega
    return re, im


def validate(omega1, omega2, *, tol: float = DEFAULT_TOL) -> TorusLattice:
    """Build a lattice from two periods.

    Each period is a ``complex`` or a pair ``(re, im)``. When all four
    components are rationals (``int`` or ``Fraction``) the exact backend is
    selected, otherwise every component is converted to ``float``.
    """
    comps = (*_components(omega1), *_components(omega2))
    exact = all(is_exact(c) for c in comps)
    if not exact and not all(math.isfinite(float(c)) for c in comps):
        raise ValueError("period components must be finite")
    w1x, w1y, w2x, w2y = (to_scalar(c, exact) for c in comps)
    lat = TorusLattice(w1x, w1y, w2x, w2y, exact, tol)
    if exact:
        degenerate = lat.cross == 0
    else:
        scale = math.sqrt(float(lat.norm1_sq) * float(lat.norm2_sq))
        degenerate = scale == 0 or abs(lat.cross) <= tol * scale
    if degenerate:
        raise DegenerateLattice(
            f"degenerate lattice: periods ({comps[0]}, {comps[1]}) and ({comps[2]}, {comps[3]}) are collinear"
        )
    return lat


@dataclass(frozen=True)
class ThetaForm:
    """Positive definite form ``Q(k, l) = a k^2 + b k l + c l^2``."""

    a: Scalar
    b: Scalar
    c: Scalar
    variant: Variant = Variant.PAPER

    def __post_init__(self):
        if not (self.a > 0 and self.discriminant > 0):
            raise NonPositiveDefinite(f"form ({self.a}, {self.b}, {self.c}) is not positive definite")

    @property
    def discriminant(self) -> Scalar:
        """``D = 4ac - b^2``."""
        return 4 * self.a * self.c - self.b * self.b

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in (self.a, self.b, self.c))

    def __call__(self, k: int, l: int) -> Scalar:
        return self.a * k * k + self.b * k * l + self.c * l * l

    def scaled(self, factor: Scalar) -> "ThetaForm":
        return ThetaForm(self.a * factor, self.b * factor, self.c * factor, self.variant)


def theta_form(lat: TorusLattice, variant: Variant = Variant.PAPER) -> ThetaForm:
    """Quadratic form whose values are the squared mode frequencies.

    ``PAPER`` expands ``|k omega1/|omega1|^2 + l omega2/|omega2|^2|^2``.
    ``DUAL`` expands ``|k u + l v|^2`` for the basis ``(u, v)`` dual to the
    periods, i.e. the inverse Gram matrix of the lattice.
    """
    variant = Variant(variant)
    n1, n2, d = lat.norm1_sq, lat.norm2_sq, lat.dot
    if variant is Variant.PAPER:
        return ThetaForm(1 / n1, 2 * d / (n1 * n2), 1 / n2, variant)
    det = lat.cross * lat.cross
    return ThetaForm(n2 / det, -2 * d / det, n1 / det, variant)


def theta(form: ThetaForm, k: int, l: int) -> Scalar:
    return form(k, l)
