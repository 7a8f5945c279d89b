"""Run the oracle checks against the closed-form counts and collect a report."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from . import oracle
from .errors import InexactBoundary
from .lattice import Variant, theta_form
from .spectrum import bounding_box, index_nullity, threshold
from .vacuum import VacuumSolution

CHECKS = ("energy", "jacobi", "periodicity", "harmonicity", "fourier", "fd")

ENERGY_RTOL = 1e-8
MAP_TOL = 1e-10
JACOBI_RTOL = 1e-9
# observed order between N and 2N must reach this to count as fourth order
HARMONIC_MIN_ORDER = 3.5


@dataclass
class CheckResult:
    name: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)


def _predictions(vs: VacuumSolution, variants) -> dict[Variant, tuple[int, int]]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InexactBoundary)
        return {v: (r.index, r.nullity) for v in variants for r in [index_nullity(vs, v)]}


def check_energy(vs: VacuumSolution, grid: int) -> CheckResult:
    quad = oracle.energy_quadrature(vs, max(grid, 4))
    closed = vs.energy
    err = abs(quad - closed) / closed if closed else abs(quad)
    ok = err <= ENERGY_RTOL
    return CheckResult("energy", ok, f"quadrature={quad!r} closed_form={closed!r} rel_err={err:.3e}",
                       {"quadrature": quad, "closed_form": closed, "rel_err": err, "grid": max(grid, 4)})


def check_periodicity(vs: VacuumSolution) -> CheckResult:
    res = oracle.map_residuals(vs)
    ok = all(v < MAP_TOL for v in res.values())
    text = " ".join(f"{k}={v:.3e}" for k, v in res.items())
    return CheckResult("periodicity", ok, text, res)


def check_jacobi(vs: VacuumSolution, variants) -> CheckResult:
    bound = JACOBI_RTOL * 4 * vs.alpha_abs_sq
    residuals = {"constant": oracle.jacobi_residual(vs, "constant")}
    defects = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InexactBoundary)
        for v in variants:
            for k, l in index_nullity(vs, v).boundary_points:
                residuals[f"{v.value}:({k},{l})"] = oracle.jacobi_residual(vs, (k, l), v)
                defects[f"{v.value}:({k},{l})"] = oracle.mode_periodicity_defect(vs.lattice, k, l, v)
    worst = max(residuals.values())
    ok = worst <= bound
    non_periodic = sorted(name for name, d in defects.items() if d > 1e-9)
    text = f"max_residual={worst:.3e} bound={bound:.3e} modes={len(residuals)}"
    if non_periodic:
        text += f" non_periodic_modes={len(non_periodic)}"
    return CheckResult("jacobi", ok, text, {"residuals": residuals, "bound": bound, "periodicity_defects": defects})


def check_harmonicity(vs: VacuumSolution, grid: int) -> CheckResult:
    n = max(grid, 8)
    coarse, fine = oracle.harmonicity_residual(vs, n), oracle.harmonicity_residual(vs, 2 * n)
    floor = 1e-9 * (1 + vs.energy)
    order = math.log2(coarse / fine) if fine > 0 and coarse > 0 else math.inf
    ok = fine <= floor or order >= HARMONIC_MIN_ORDER
    return CheckResult("harmonicity", ok, f"residual(N={n})={coarse:.3e} residual(N={2 * n})={fine:.3e} order={order:.2f}",
                       {"grid": n, "coarse": coarse, "fine": fine, "order": order})


def check_fourier(vs: VacuumSolution, variants, box: int | None) -> CheckResult:
    pred = _predictions(vs, variants)
    details, ok = {}, True
    for v in variants:
        K = box if box is not None else max(bounding_box(theta_form(vs.lattice, v), threshold(vs))) + 1
        res = oracle.fourier_block_spectrum(vs, K, v)
        match = (res.negatives, res.zeros) == pred[v]
        ok &= match
        details[v.value] = {"negatives": res.negatives, "zeros": res.zeros, "predicted": list(pred[v]), "box": K}
    text = " ".join(f"{k}: negatives={d['negatives']} zeros={d['zeros']} predicted={tuple(d['predicted'])}"
                    for k, d in details.items())
    return CheckResult("fourier", ok, text, details)


def check_fd(vs: VacuumSolution, variants, grid: int) -> CheckResult:
    fd = oracle.fd_spectrum(vs, grid)
    pred = _predictions(vs, list(Variant))
    matching = [v for v in Variant if pred[v][0] == fd.negatives]
    details = {
        "grid": grid,
        "negatives": fd.negatives,
        "near_zero": fd.near_zero,
        "zero_band": fd.zero_band,
        "predicted_gap": fd.predicted_gap,
        "lowest": [float(x) for x in fd.eigenvalues[: fd.negatives + fd.near_zero + 1]],
        "predictions": {v.value: {"index": pred[v][0], "nullity": pred[v][1]} for v in Variant},
        "matching_variants": [v.value for v in matching],
    }
    if len(variants) > 1:
        ok = len(matching) == 1 or (len(matching) == 2 and pred[Variant.PAPER] == pred[Variant.DUAL])
        ok = ok and any(pred[v] == (fd.negatives, fd.near_zero) for v in matching)
    else:
        ok = pred[variants[0]] == (fd.negatives, fd.near_zero)
    names = ", ".join(v.value for v in matching) or "none"
    preds = " ".join(f"{v.value}=({pred[v][0]},{pred[v][1]})" for v in Variant)
    text = f"N={grid} negatives={fd.negatives} near_zero={fd.near_zero} predictions: {preds} matching: {names}"
    return CheckResult("fd", ok, text, details)


def run_checks(vs: VacuumSolution, checks, variants, *, grid: int = 24, box: int | None = None) -> list[CheckResult]:
    checks = CHECKS if "all" in checks else [c for c in CHECKS if c in checks]
    variants = [Variant(v) for v in variants]
    out = []
    for name in checks:
        if name == "energy":
            out.append(check_energy(vs, grid))
        elif name == "periodicity":
            out.append(check_periodicity(vs))
        elif name == "jacobi":
            out.append(check_jacobi(vs, variants))
        elif name == "harmonicity":
            out.append(check_harmonicity(vs, grid))
        elif name == "fourier":
            out.append(check_fourier(vs, variants, box))
        elif name == "fd":
            out.append(check_fd(vs, variants, grid))
    return out
