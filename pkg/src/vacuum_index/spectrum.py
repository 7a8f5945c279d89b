"""Closed-form Jacobi spectrum of vacuum solutions and the index/nullity counts.

Each lattice mode ``(k, l)`` carries two real eigenvalues,
``pi^2 theta(k, l)`` and ``pi^2 theta(k, l) - 4|alpha|^2``. The index counts
modes strictly inside the ellipse ``theta < threshold``; the nullity counts
the modes on it plus the constant kernel direction.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InexactBoundary, NonPositiveDefinite
from .lattice import DEFAULT_TOL, Scalar, ThetaForm, Variant, theta_form
from .vacuum import VacuumSolution

PI2 = math.pi**2


class CountMode(str, enum.Enum):
    STRICT = "strict"
    EQUAL = "equal"


@dataclass(frozen=True)
class LatticeCount:
    count: int
    points: tuple[tuple[int, int], ...]
    exact: bool
    # float backend only: points within the tolerance band of the level
    near: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class SpectrumEntry:
    k: int
    l: int
    theta_value: Scalar
    lambda_minus_coeff: Scalar
    lambda_plus_coeff: Scalar

    @property
    def lambda_minus(self) -> float:
        return PI2 * float(self.lambda_minus_coeff)

    @property
    def lambda_plus(self) -> float:
        return PI2 * float(self.lambda_plus_coeff)


@dataclass(frozen=True)
class IndexNullityResult:
    index: int
    nullity: int
    threshold: Scalar
    interior_points: int
    boundary_points: tuple[tuple[int, int], ...]
    variant: Variant
    exact: bool
    index_range: tuple[int, int] = field(default=(0, 0))
    nullity_range: tuple[int, int] = field(default=(1, 1))


def threshold(vs: VacuumSolution) -> Scalar:
    """Ellipse level ``E / (pi^2 |W|)``, identical to ``4 |alpha|^2 / pi^2``."""
    cross = vs.lattice.cross
    return vs.p_abs_sq / (cross * cross)


def _box_radius(num: Scalar, den: Scalar, exact: bool) -> int:
    # largest r with r^2 <= num/den
    if exact:
        q = Fraction(num) / Fraction(den)
        return math.isqrt(q.numerator // q.denominator)
    return int(math.floor(math.sqrt(max(float(num) / float(den), 0.0)) * (1 + 1e-12))) + 1


def bounding_box(form: ThetaForm, level: Scalar) -> tuple[int, int]:
    """Half-widths ``(K, L)`` enclosing the ellipse ``Q <= level``."""
    exact = form.exact and isinstance(level, (Fraction, int))
    D = form.discriminant
    return _box_radius(4 * form.c * level, D, exact), _box_radius(4 * form.a * level, D, exact)


def _grid_values(form: ThetaForm, K: int, L: int, exact: bool):
    ks = np.arange(-K, K + 1)[:, None]
    ls = np.arange(-L, L + 1)[None, :]
    if not exact:
        q = float(form.a) * ks * ks + float(form.b) * ks * ls + float(form.c) * ls * ls
        return ks, ls, q, 1
    # integer coefficients after clearing denominators
    coeffs = [Fraction(v) for v in (form.a, form.b, form.c)]
    scale = math.lcm(*(c.denominator for c in coeffs))
    A, B, C = (int(c * scale) for c in coeffs)
    bound = (abs(A) + abs(B) + abs(C)) * max(K, L, 1) ** 2
    dtype = np.int64 if bound < 2**62 else object
    ks, ls = ks.astype(dtype), ls.astype(dtype)
    return ks, ls, A * ks * ks + B * ks * ls + C * ls * ls, scale


def _points(mask, ks, ls) -> tuple[tuple[int, int], ...]:
    idx = np.argwhere(mask)
    k0, l0 = int(ks[0, 0]), int(ls[0, 0])
    return tuple((int(i) + k0, int(j) + l0) for i, j in idx)


def count_lattice_points(
    form: ThetaForm,
    level: Scalar,
    mode: CountMode = CountMode.STRICT,
    *,
    tol: float = DEFAULT_TOL,
) -> LatticeCount:
    """Lattice points with ``Q(k, l) < level`` (STRICT) or ``Q(k, l) = level`` (EQUAL).

    On the float backend equality means ``|Q - level| <= tol * level``;
    STRICT then excludes that band and the band itself is returned as ``near``.
    """
    if not (form.a > 0 and form.discriminant > 0):
        raise NonPositiveDefinite("form is not positive definite")
    if level < 0:
        raise ValueError("level must be non-negative")
    mode = CountMode(mode)
    exact = form.exact and isinstance(level, (Fraction, int))
    K, L = bounding_box(form, level)
    ks, ls, q, scale = _grid_values(form, K, L, exact)
    if exact:
        lv = Fraction(level) * scale
        lv_int = lv.numerator if lv.denominator == 1 else None
        if lv_int is None:
            # level not on the integer value lattice: nothing can equal it
            strict = q * lv.denominator < lv.numerator
            equal = np.zeros_like(strict, dtype=bool)
        else:
            strict = q < lv_int
            equal = q == lv_int
        near = ()
    else:
        lvl = float(level)
        band = tol * lvl
        strict = q < lvl - band
        equal = np.abs(q - lvl) <= band
        near = _points(equal, ks, ls)
    mask = strict if mode is CountMode.STRICT else equal
    strict_or_equal_points = _points(mask, ks, ls)
    return LatticeCount(len(strict_or_equal_points), strict_or_equal_points, exact, near)


def index_nullity(
    vs: VacuumSolution, variant: Variant = Variant.PAPER, *, tol: float | None = None
) -> IndexNullityResult:
    """Index and nullity from lattice counts inside and on the threshold ellipse."""
    variant = Variant(variant)
    tol = vs.lattice.tol if tol is None else tol
    form = theta_form(vs.lattice, variant)
    level = threshold(vs)
    inside = count_lattice_points(form, level, CountMode.STRICT, tol=tol)
    on = count_lattice_points(form, level, CountMode.EQUAL, tol=tol)
    exact = inside.exact
    boundary = on.points
    index, nullity = inside.count, 1 + len(boundary)
    index_range, nullity_range = (index, index), (nullity, nullity)
    if not exact and level != 0 and boundary:
        # near-boundary points may lie inside, on, or outside the ellipse
        index_range = (index, index + len(boundary))
        nullity_range = (1, nullity)
        warnings.warn(
            f"{len(boundary)} lattice points within tolerance of the {variant.value} ellipse; "
            "boundary membership is not certified on the float backend",
            InexactBoundary,
            stacklevel=2,
        )
    return IndexNullityResult(
        index=index,
        nullity=nullity,
        threshold=level,
        interior_points=inside.count,
        boundary_points=boundary,
        variant=variant,
        exact=exact,
        index_range=index_range,
        nullity_range=nullity_range,
    )


def enumerate_spectrum(
    vs: VacuumSolution, lambda_max: float, variant: Variant = Variant.PAPER
) -> list[SpectrumEntry]:
    """All modes whose lower branch is ``<= lambda_max``, sorted by (lower, upper) branch."""
    variant = Variant(variant)
    thr = threshold(vs)
    if lambda_max < -PI2 * float(thr):
        raise ValueError("lambda_max must be >= -4|alpha|^2")
    form = theta_form(vs.lattice, variant)
    level = thr if lambda_max == 0 else thr + lambda_max / PI2
    # float thetas within tolerance of the level still count as included
    slack = 0 if vs.exact else vs.lattice.tol * max(float(thr), 1.0)
    K, L = bounding_box(form, level + slack)
    entries = []
    for k in range(-K, K + 1):
        for l in range(-L, L + 1):
            th = form(k, l)
            if th <= level + slack:
                entries.append(SpectrumEntry(k, l, th, th - thr, th))
    entries.sort(key=lambda e: (e.lambda_minus_coeff, e.lambda_plus_coeff, e.k, e.l))
    return entries


def spectrum_counts(entries: list[SpectrumEntry], vs: VacuumSolution, tol: float | None = None) -> tuple[int, int]:
    """(negative, zero) eigenvalue counts over both branches of ``entries``."""
    tol = vs.lattice.tol if tol is None else tol
    band = 0 if vs.exact else tol * float(threshold(vs))
    neg = zero = 0
    for e in entries:
        for lam in (e.lambda_minus_coeff, e.lambda_plus_coeff):
            if abs(lam) <= band:
                zero += 1
            elif lam < 0:
                neg += 1
    return neg, zero
