"""Ellipse counting function and the large-energy index/energy ratio."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lattice import Scalar, ThetaForm, TorusLattice, Variant, theta_form
from .spectrum import CountMode, count_lattice_points, index_nullity
from .vacuum import build


def counting_function(form: ThetaForm, x: Scalar) -> int:
    """``A(x) = #{(k, l) : Q(k, l) < x}``."""
    return count_lattice_points(form, x, CountMode.STRICT).count


def leading_term(form: ThetaForm, x: float) -> float:
    """Area term ``2 pi x / sqrt(D)`` of ``A(x)``."""
    return 2 * math.pi * float(x) / math.sqrt(float(form.discriminant))


def angle_limit(lat: TorusLattice) -> float:
    """``1 / (2 pi sin^2(angle(omega1, omega2)))``."""
    return 1.0 / (2 * math.pi * math.sin(lat.angle) ** 2)


def leading_limit(lat: TorusLattice, variant: Variant) -> float:
    """Limit of index/energy implied by the leading term of the chosen form.

    ``index ~ 2 pi thr / sqrt(D)`` and ``E = pi^2 |W| thr``.
    """
    form = theta_form(lat, variant)
    return 2.0 / (math.pi * float(lat.wronskian_abs) * math.sqrt(float(form.discriminant)))


@dataclass(frozen=True)
class RatioSample:
    t: int
    n: int
    m: int
    energy: float
    index: int
    ratio: float
    limit: float


def ratio_table(
    lat: TorusLattice, ray: tuple[int, int], steps: int, variant: Variant = Variant.PAPER
) -> list[RatioSample]:
    """Index/energy along ``(n, m) = t * ray`` for ``t = 1..steps``."""
    n0, m0 = ray
    if (n0, m0) == (0, 0):
        raise ValueError("ray must be non-zero")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    limit = angle_limit(lat)
    rows = []
    for t in range(1, steps + 1):
        vs = build(lat, t * n0, t * m0)
        res = index_nullity(vs, variant)
        rows.append(RatioSample(t, t * n0, t * m0, vs.energy, res.index, res.index / vs.energy, limit))
    return rows


def smoothed_deviation(rows: list[RatioSample], t: int) -> float:
    """Relative deviation from the limit of the ratio averaged over ``t-1, t, t+1``."""
    by_t = {r.t: r for r in rows}
    window = [by_t[s] for s in (t - 1, t, t + 1) if s in by_t]
    mean = sum(r.ratio for r in window) / len(window)
    limit = window[0].limit
    return abs(mean - limit) / limit
