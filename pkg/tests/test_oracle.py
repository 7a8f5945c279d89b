import math
import warnings

import numpy as np
import pytest

from vacuum_index import oracle
from vacuum_index.errors import BoxTooSmall, GridTooCoarse, InexactBoundary, NotANullMode
from vacuum_index.lattice import Variant, validate
from vacuum_index.spectrum import PI2, enumerate_spectrum, index_nullity
from vacuum_index.vacuum import build


def test_fourier_square_k3(square):
    res = oracle.fourier_block_spectrum(build(square, 1, 0), 3)
    assert (res.negatives, res.zeros) == (1, 5)
    assert res.positives == 2 * 49 - 6
    assert res.exact
    lows = sorted(b.low for b in res.blocks)
    assert lows[0] == pytest.approx(-PI2)


def test_fourier_constant(square):
    res = oracle.fourier_block_spectrum(build(square, 0, 0), 2)
    assert (res.negatives, res.zeros) == (0, 2)
    assert all(b.low_coeff == b.high_coeff == b.theta_value for b in res.blocks)


def test_fourier_square_21(square):
    res = oracle.fourier_block_spectrum(build(square, 2, 1), 6)
    assert (res.negatives, res.zeros) == (13, 9)


def test_fourier_box_too_small(square):
    with pytest.raises(BoxTooSmall):
        oracle.fourier_block_spectrum(build(square, 2, 1), 1)


def test_fourier_hexagonal_both_variants(hexagonal):
    vs = build(hexagonal, 1, 1)
    dual = oracle.fourier_block_spectrum(vs, 4, Variant.DUAL)
    paper = oracle.fourier_block_spectrum(vs, 4, Variant.PAPER)
    assert (dual.negatives, dual.zeros) == (7, 7)
    assert (paper.negatives, paper.zeros) == (13, 7)
    lows = sorted(b.low for b in dual.blocks)[:7]
    np.testing.assert_allclose(lows, [-4 * PI2] + [-8 * PI2 / 3] * 6, rtol=1e-9)


def test_mode_periodicity(hexagonal, rect):
    assert oracle.mode_periodicity_defect(hexagonal, 1, 2, Variant.DUAL) < 1e-12
    assert oracle.mode_periodicity_defect(hexagonal, 1, 1, Variant.PAPER) > 1e-3
    assert oracle.mode_periodicity_defect(rect, 3, -2, Variant.PAPER) < 1e-12


def test_fd_square_n24(square):
    fd = oracle.fd_spectrum(build(square, 1, 0), 24)
    assert (fd.negatives, fd.near_zero) == (1, 5)
    assert fd.eigenvalues[0] == pytest.approx(-PI2, rel=2e-2)
    assert fd.zero_band < fd.predicted_gap / 2


def test_fd_constant_n16(square):
    fd = oracle.fd_spectrum(build(square, 0, 0), 16)
    assert (fd.negatives, fd.near_zero) == (0, 2)


def test_fd_too_coarse(square):
    with pytest.raises(GridTooCoarse):
        oracle.fd_spectrum(build(square, 1, 0), 4)


def test_fd_hexagonal_matches_dual(hexagonal):
    fd = oracle.fd_spectrum(build(hexagonal, 1, 1), 32)
    assert (fd.negatives, fd.near_zero) == (7, 7)


def test_fd_second_order_convergence(square):
    vs = build(square, 1, 0)
    exact = np.sort([lam for e in enumerate_spectrum(vs, 3 * PI2) for lam in (e.lambda_minus, e.lambda_plus)])
    errs = [np.max(np.abs(oracle.fd_spectrum(vs, N).eigenvalues[: exact.size] - exact)) for N in (16, 32, 64)]
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert all(o == pytest.approx(2, abs=0.2) for o in orders)


def test_energy_quadrature(square, rect):
    vs = build(square, 1, 0)
    assert oracle.energy_quadrature(vs, 32) == pytest.approx(2 * PI2, rel=1e-10)
    integrand = oracle.energy_integrand(vs, 16)
    np.testing.assert_allclose(integrand, 4 * PI2, rtol=1e-10)
    assert oracle.energy_quadrature(build(square, 0, 0)) == 0
    assert oracle.energy_quadrature(build(rect, 1, 0), 32) == pytest.approx(4 * PI2, rel=1e-8)


def test_jacobi_residual_square(square):
    vs = build(square, 1, 0)
    assert oracle.jacobi_residual(vs, "constant") < 1e-12
    assert oracle.jacobi_residual(vs, (1, 0)) < 1e-9 * PI2
    with pytest.raises(NotANullMode):
        oracle.jacobi_residual(vs, (1, 1))


def test_jacobi_residual_hexagonal_dual(hexagonal):
    vs = build(hexagonal, 1, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InexactBoundary)
        boundary = index_nullity(vs, Variant.DUAL).boundary_points
    assert len(boundary) == 6
    for k, l in boundary:
        assert oracle.jacobi_residual(vs, (k, l), Variant.DUAL) < 1e-9 * 4 * vs.alpha_abs_sq


def test_jacobi_operator_kills_kernel_vector(hexagonal):
    vs = build(hexagonal, 2, -1)
    v0 = oracle.constant_kernel_vector(vs)
    from vacuum_index.vacuum import msp

    assert np.linalg.norm(oracle.jacobi_operator_algebraic(vs, msp(v0))) < 1e-12


def test_harmonicity_fourth_order(square):
    vs = build(square, 1, 0)
    r = [oracle.harmonicity_residual(vs, N) for N in (16, 32, 64)]
    orders = [math.log2(r[i] / r[i + 1]) for i in range(2)]
    assert all(o == pytest.approx(4, abs=0.3) for o in orders)


def test_harmonicity_constant_map(square):
    assert oracle.harmonicity_residual(build(square, 0, 0), 16) == 0


@pytest.mark.xfail(
    strict=True,
    reason="fourth-order truncation error at N=64 is about 1.4e-4, above 1e-6*(1+E); see the decisions ledger",
)
def test_harmonicity_absolute_bound_n64(square):
    vs = build(square, 1, 0)
    assert oracle.harmonicity_residual(vs, 64) < 1e-6 * (1 + vs.energy)


def test_map_residuals(square, hexagonal):
    for lat, nm in ((square, (1, 0)), (hexagonal, (1, 1)), (square, (0, 0))):
        res = oracle.map_residuals(build(lat, *nm))
        assert set(res) == {"periodicity", "unitarity", "determinant"}
        assert max(res.values()) < 1e-10
