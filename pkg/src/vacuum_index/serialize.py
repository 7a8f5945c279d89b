"""JSON-compatible dictionaries for result types.

Exact scalars travel as ``"p/q"`` strings, floats as JSON numbers, complex
numbers as ``[re, im]``. Energies are multiples of ``pi^2``; on the exact
backend they are written as ``"q*pi^2"`` next to a decimal value.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .asymptotics import RatioSample
from .lattice import Scalar, TorusLattice, Variant
from .spectrum import IndexNullityResult, SpectrumEntry
from .vacuum import VacuumSolution


def scalar_out(x: Scalar):
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def scalar_in(x) -> Scalar:
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def complex_out(re: Scalar, im: Scalar) -> list:
    return [scalar_out(re), scalar_out(im)]


def pi2_multiple(coeff: Scalar) -> str | float:
    if isinstance(coeff, Fraction):
        return f"{coeff}*pi^2"
    return math.pi**2 * float(coeff)


def lattice_out(lat: TorusLattice) -> dict:
    return {"omega1": complex_out(lat.w1x, lat.w1y), "omega2": complex_out(lat.w2x, lat.w2y)}


def index_result_to_dict(res: IndexNullityResult) -> dict:
    return {
        "variant": res.variant.value,
        "index": res.index,
        "nullity": res.nullity,
        "threshold": scalar_out(res.threshold),
        "interior_points": res.interior_points,
        "boundary_points": [list(p) for p in res.boundary_points],
        "exact": res.exact,
        "index_range": list(res.index_range),
        "nullity_range": list(res.nullity_range),
    }


def index_result_from_dict(d: dict) -> IndexNullityResult:
    return IndexNullityResult(
        index=int(d["index"]),
        nullity=int(d["nullity"]),
        threshold=scalar_in(d["threshold"]),
        interior_points=int(d["interior_points"]),
        boundary_points=tuple((int(k), int(l)) for k, l in d["boundary_points"]),
        variant=Variant(d["variant"]),
        exact=bool(d["exact"]),
        index_range=tuple(d["index_range"]),
        nullity_range=tuple(d["nullity_range"]),
    )


def count_report(vs: VacuumSolution, results: list[IndexNullityResult]) -> dict:
    """Top-level ``count`` document: solution data plus one entry per variant."""
    doc = {
        **lattice_out(vs.lattice),
        "n": vs.n,
        "m": vs.m,
        "energy": pi2_multiple(vs.energy_coeff),
        "energy_decimal": vs.energy,
        "sqrt_ab": [vs.sqrt_ab.real + 0.0, vs.sqrt_ab.imag + 0.0],
        "exact": vs.exact,
    }
    if len(results) == 1:
        doc.update(index_result_to_dict(results[0]))
    else:
        doc["results"] = [index_result_to_dict(r) for r in results]
    return doc


def spectrum_entry_to_dict(e: SpectrumEntry) -> dict:
    return {
        "k": e.k,
        "l": e.l,
        "theta": scalar_out(e.theta_value),
        "lambda_minus_coeff": scalar_out(e.lambda_minus_coeff),
        "lambda_plus_coeff": scalar_out(e.lambda_plus_coeff),
        "lambda_minus": e.lambda_minus,
        "lambda_plus": e.lambda_plus,
    }


def spectrum_entry_from_dict(d: dict) -> SpectrumEntry:
    return SpectrumEntry(
        int(d["k"]),
        int(d["l"]),
        scalar_in(d["theta"]),
        scalar_in(d["lambda_minus_coeff"]),
        scalar_in(d["lambda_plus_coeff"]),
    )


def ratio_sample_to_dict(r: RatioSample) -> dict:
    return {
        "t": r.t,
        "n": r.n,
        "m": r.m,
        "energy": r.energy,
        "index": r.index,
        "ratio": r.ratio,
        "limit": r.limit,
    }


def ratio_sample_from_dict(d: dict) -> RatioSample:
    return RatioSample(
        int(d["t"]), int(d["n"]), int(d["m"]), float(d["energy"]), int(d["index"]), float(d["ratio"]), float(d["limit"])
    )
