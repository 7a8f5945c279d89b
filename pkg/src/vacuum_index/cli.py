"""Command-line interface.

Usage:
    vacuum-index count --omega1 1,0 --omega2 0,1 -n 1 -m 0 --format json
    vacuum-index spectrum --omega1 1,0 --omega2 0,2 -n 1 -m 0 --lambda-max 20
    vacuum-index verify --omega1 1,0 --omega2 0,1 -n 1 -m 0 --check all --grid 24
    vacuum-index asymptotics --omega1 1,0 --omega2 0,1 --ray 1,0 --steps 40
    vacuum-index map-sample --omega1 1,0 --omega2 0,1 -n 1 -m 0 --resolution 16

Exit codes: 0 success, 1 invalid input, 2 verification failure.
"""

from __future__ import annotations

import csv
import io
import json
import re
import sys
import warnings

import click
import numpy as np

from . import serialize
from .asymptotics import ratio_table
from .errors import InexactBoundary
from .lattice import DEFAULT_TOL, TorusLattice, Variant, parse_scalar, validate
from .spectrum import enumerate_spectrum, index_nullity, spectrum_counts
from .vacuum import VacuumSolution, build, evaluate, sphere_point
from .verify import CHECKS, run_checks

EXIT_INVALID = 1
EXIT_VERIFY = 2

_NUMBER = re.compile(r"^[+-]?(\d+(/\d+)?|\d*\.\d*([eE][+-]?\d+)?|\d+[eE][+-]?\d+)$")


class VerificationFailed(Exception):
    pass


def parse_complex(text: str):
    """Parse ``"re,im"``; each part is an integer, ``p/q`` or a decimal."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise click.BadParameter(f"expected 're,im', got {text!r}")
    for p in parts:
        if not _NUMBER.match(p):
            raise click.BadParameter(
                f"cannot parse {p!r}: use integers, p/q rationals or decimals (symbolic tokens are not accepted)"
            )
    try:
        return tuple(parse_scalar(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(str(exc)) from exc


def make_lattice(omega1: str, omega2: str, tolerance: float | None) -> TorusLattice:
    return validate(parse_complex(omega1), parse_complex(omega2), tol=tolerance or DEFAULT_TOL)


def resolve_variants(lat: TorusLattice, variant: str | None) -> list[Variant]:
    if variant is None:
        variant = "paper" if lat.is_rectangular else "both"
    if variant == "both":
        return [Variant.PAPER, Variant.DUAL]
    return [Variant(variant)]


def lattice_options(f):
    f = click.option("--output", "output", type=click.Path(dir_okay=False), default=None, help="Write to FILE instead of stdout.")(f)
    f = click.option("--tolerance", type=float, default=None, help="Relative tolerance for float equality decisions.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]), default="text")(f)
    f = click.option("--variant", type=click.Choice(["paper", "dual", "both"]), default=None,
                     help="Quadratic form; default paper on rectangular lattices, both otherwise.")(f)
    f = click.option("--omega2", required=True, help="Second period 're,im'.")(f)
    f = click.option("--omega1", required=True, help="First period 're,im'.")(f)
    return f


def frequency_options(f):
    f = click.option("-m", "m", type=int, default=0, show_default=True)(f)
    f = click.option("-n", "n", type=int, default=1, show_default=True)(f)
    return f


def emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x) -> str:
    return repr(float(x))


@click.group()
def cli():
    """Index and nullity of vacuum harmonic maps from flat tori to the 2-sphere."""


@cli.command()
@lattice_options
@frequency_options
@click.option("--box", type=int, default=None, hidden=True)
@click.option("--grid", type=int, default=None, hidden=True)
def count(omega1, omega2, variant, fmt, tolerance, output, n, m, box, grid):
    """Index and nullity from lattice counts."""
    lat = make_lattice(omega1, omega2, tolerance)
    vs = build(lat, n, m)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", InexactBoundary)
        results = [index_nullity(vs, v) for v in resolve_variants(lat, variant)]
    for w in caught:
        click.echo(f"warning: {w.message}", err=True)
    if fmt == "json":
        emit(_json(serialize.count_report(vs, results)), output)
    elif fmt == "csv":
        header = ["variant", "index", "nullity", "threshold", "energy", "energy_decimal", "boundary_points", "exact"]
        rows = [
            [r.variant.value, r.index, r.nullity, serialize.scalar_out(r.threshold), serialize.pi2_multiple(vs.energy_coeff),
             _num(vs.energy), len(r.boundary_points), r.exact]
            for r in results
        ]
        emit(_csv(header, rows), output)
    else:
        lines = [f"lattice: omega1={omega1} omega2={omega2} (n, m)=({n}, {m}) exact={vs.exact}",
                 f"energy: {serialize.pi2_multiple(vs.energy_coeff)} = {vs.energy!r}"]
        for r in results:
            lines.append(
                f"[{r.variant.value}] threshold={serialize.scalar_out(r.threshold)} index={r.index} nullity={r.nullity}"
                + ("" if r.exact else f" (index in {list(r.index_range)}, nullity in {list(r.nullity_range)})")
            )
            lines.append(f"[{r.variant.value}] boundary points: {' '.join(f'({k},{l})' for k, l in r.boundary_points) or '-'}")
        emit("\n".join(lines) + "\n", output)


@cli.command()
@lattice_options
@frequency_options
@click.option("--lambda-max", type=float, default=0.0, show_default=True)
def spectrum(omega1, omega2, variant, fmt, tolerance, output, n, m, lambda_max):
    """Closed-form Jacobi eigenvalues up to LAMBDA_MAX."""
    lat = make_lattice(omega1, omega2, tolerance)
    vs = build(lat, n, m)
    variants = resolve_variants(lat, variant)
    tables = {v: enumerate_spectrum(vs, lambda_max, v) for v in variants}
    if fmt == "json":
        doc = {**serialize.lattice_out(lat), "n": n, "m": m, "lambda_max": lambda_max, "spectra": {}}
        for v, entries in tables.items():
            neg, zero = spectrum_counts(entries, vs)
            doc["spectra"][v.value] = {
                "entries": [serialize.spectrum_entry_to_dict(e) for e in entries],
                "negatives": neg,
                "zeros": zero,
            }
        emit(_json(doc), output)
        return
    header = ["variant", "k", "l", "theta", "lambda_minus", "lambda_plus"]
    rows = [[v.value, e.k, e.l, serialize.scalar_out(e.theta_value), _num(e.lambda_minus), _num(e.lambda_plus)]
            for v, entries in tables.items() for e in entries]
    if fmt == "csv":
        emit(_csv(header, rows), output)
    else:
        lines = [f"{'variant':<7} {'k':>4} {'l':>4} {'theta':>12} {'lambda_minus':>14} {'lambda_plus':>14}"]
        lines += [f"{r[0]:<7} {r[1]:>4} {r[2]:>4} {str(r[3]):>12} {float(r[4]):>14.6f} {float(r[5]):>14.6f}" for r in rows]
        for v, entries in tables.items():
            neg, zero = spectrum_counts(entries, vs)
            lines.append(f"[{v.value}] negative eigenvalues: {neg}, zero eigenvalues: {zero}")
        emit("\n".join(lines) + "\n", output)


@cli.command()
@lattice_options
@frequency_options
@click.option("--check", "checks", multiple=True, type=click.Choice([*CHECKS, "all"]), default=["all"], show_default=True)
@click.option("--grid", type=int, default=24, show_default=True, help="Grid size for fd, energy and harmonicity checks.")
@click.option("--box", type=int, default=None, help="Fourier box half-width (default: from the threshold ellipse).")
def verify(omega1, omega2, variant, fmt, tolerance, output, n, m, checks, grid, box):
    """Run the numerical oracles against the closed-form counts."""
    lat = make_lattice(omega1, omega2, tolerance)
    vs = build(lat, n, m)
    results = run_checks(vs, checks, resolve_variants(lat, variant), grid=grid, box=box)
    if fmt == "json":
        doc = {**serialize.lattice_out(lat), "n": n, "m": m, "passed": all(r.passed for r in results),
               "checks": [{"name": r.name, "passed": r.passed, "summary": r.summary, "details": r.details} for r in results]}
        emit(_json(doc), output)
    elif fmt == "csv":
        emit(_csv(["check", "passed", "summary"], [[r.name, r.passed, r.summary] for r in results]), output)
    else:
        emit("".join(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.summary}\n" for r in results), output)
    if not all(r.passed for r in results):
        raise VerificationFailed(", ".join(r.name for r in results if not r.passed))


@cli.command()
@lattice_options
@click.option("--ray", default="1,0", show_default=True, help="Direction 'n0,m0' in frequency space.")
@click.option("--steps", type=int, default=40, show_default=True)
def asymptotics(omega1, omega2, variant, fmt, tolerance, output, ray, steps):
    """Index/energy ratio along a ray of frequency integers."""
    lat = make_lattice(omega1, omega2, tolerance)
    try:
        n0, m0 = (int(x) for x in ray.split(","))
    except ValueError as exc:
        raise click.BadParameter(f"invalid ray {ray!r}") from exc
    variants = resolve_variants(lat, variant)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InexactBoundary)
        tables = {v: ratio_table(lat, (n0, m0), steps, v) for v in variants}
    if fmt == "json":
        emit(_json({v.value: [serialize.ratio_sample_to_dict(r) for r in rows] for v, rows in tables.items()}), output)
        return
    header = ["t", "n", "m", "energy", "index", "ratio", "limit"]
    if len(variants) > 1:
        header = ["variant", *header]
    rows = []
    for v, samples in tables.items():
        for r in samples:
            row = [r.t, r.n, r.m, _num(r.energy), r.index, _num(r.ratio), _num(r.limit)]
            rows.append([v.value, *row] if len(variants) > 1 else row)
    emit(_csv(header, rows), output)


@cli.command("map-sample")
@lattice_options
@frequency_options
@click.option("--resolution", type=int, default=16, show_default=True)
def map_sample(omega1, omega2, variant, fmt, tolerance, output, n, m, resolution):
    """Sample the map on an RxR grid of the fundamental domain as points of S^2."""
    if resolution < 1:
        raise click.BadParameter("resolution must be >= 1")
    lat = make_lattice(omega1, omega2, tolerance)
    vs = build(lat, n, m)
    rows = sample_sphere(vs, resolution)
    if fmt == "json":
        emit(_json([dict(zip(("s", "t", "X", "Y", "Z"), r)) for r in rows]), output)
    else:
        emit(_csv(["s", "t", "X", "Y", "Z"], [[_num(v) for v in r] for r in rows]), output)


def sample_sphere(vs: VacuumSolution, resolution: int) -> list[tuple[float, ...]]:
    s = np.arange(resolution) / resolution
    S, T = np.meshgrid(s, s, indexing="ij")
    z = S * vs.lattice.omega1 + T * vs.lattice.omega2
    pts = sphere_point(evaluate(vs, z))
    return [
        (float(S[i, j]), float(T[i, j]), *(float(c) for c in pts[i, j]))
        for i in range(resolution)
        for j in range(resolution)
    ]


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="vacuum-index", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.ClickException, click.exceptions.Abort) as exc:
        msg = exc.format_message() if isinstance(exc, click.ClickException) else "aborted"
        click.echo(f"error: {msg}", err=True)
        return EXIT_INVALID
    except VerificationFailed as exc:
        click.echo(f"verification failed: {exc}", err=True)
        return EXIT_VERIFY
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
