"""Independent numerical checks of the closed-form index and nullity.

Nothing here calls :mod:`vacuum_index.spectrum` to produce a count; the
closed form is consulted only to size boxes and to predict spectral gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .eigen import batched_jacobi_eigh
from .errors import BoxTooSmall, GridTooCoarse, NotANullMode
from .lattice import Scalar, TorusLattice, Variant, theta_form
from .spectrum import PI2, bounding_box, enumerate_spectrum, threshold
from .vacuum import VacuumSolution, a_matrix, evaluate, expm_offdiag, msp

ZERO_REL_TOL = 1e-9


# ---------------------------------------------------------------- Fourier blocks


def mode_basis(lat: TorusLattice, variant: Variant) -> tuple[tuple[Scalar, Scalar], tuple[Scalar, Scalar]]:
    """Frequencies ``(u, v)`` of the modes ``(1, 0)`` and ``(0, 1)``; mode ``(k, l)`` has ``k u + l v``.

    ``DUAL`` uses the basis dual to the periods, so the exponential is
    periodic on the lattice. ``PAPER`` uses ``u = w1/|w1|^2``, ``v = w2/|w2|^2``.
    """
    if Variant(variant) is Variant.DUAL:
        cr = lat.cross
        return (lat.w2y / cr, -lat.w2x / cr), (-lat.w1y / cr, lat.w1x / cr)
    n1, n2 = lat.norm1_sq, lat.norm2_sq
    return (lat.w1x / n1, lat.w1y / n1), (lat.w2x / n2, lat.w2y / n2)


def mode_frequency(lat: TorusLattice, k: int, l: int, variant: Variant) -> tuple[Scalar, Scalar]:
    """Plane frequency ``xi`` of mode ``(k, l)``; the mode is ``exp(2 pi i xi . (x, y))``."""
    (ux, uy), (vx, vy) = mode_basis(lat, variant)
    return k * ux + l * vx, k * uy + l * vy


def mode_periodicity_defect(lat: TorusLattice, k: int, l: int, variant: Variant) -> float:
    """``max_j |exp(2 pi i xi . omega_j) - 1|``; zero iff the mode descends to the torus."""
    xi = np.array([float(v) for v in mode_frequency(lat, k, l, variant)])
    defects = []
    for w in (lat.omega1, lat.omega2):
        phase = 2 * math.pi * (xi[0] * w.real + xi[1] * w.imag)
        defects.append(abs(complex(math.cos(phase), math.sin(phase)) - 1))
    return max(defects)


def fourier_block(vs: VacuumSolution, theta_value: float) -> np.ndarray:
    """2x2 Hermitian block acting on ``(f_{k,l}, conj f_{-k,-l})``."""
    a2 = abs(vs.alpha) ** 2
    p = PI2 * theta_value - 2 * a2
    q = -2 * vs.alpha * np.conj(vs.beta)
    return np.array([[p, q], [np.conj(q), p]], dtype=complex)


def _exact_sqrt(x: Fraction) -> Fraction | None:
    num, den = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if num * num == x.numerator and den * den == x.denominator:
        return Fraction(num, den)
    return None


@dataclass(frozen=True)
class BlockEigen:
    k: int
    l: int
    theta_value: Scalar
    # eigenvalues in units of pi^2, ascending
    low_coeff: Scalar
    high_coeff: Scalar

    @property
    def low(self) -> float:
        return PI2 * float(self.low_coeff)

    @property
    def high(self) -> float:
        return PI2 * float(self.high_coeff)


@dataclass(frozen=True)
class FourierBlockResult:
    blocks: tuple[BlockEigen, ...]
    negatives: int
    zeros: int
    positives: int
    variant: Variant
    exact: bool


def _block_eigs(vs: VacuumSolution, th: Scalar) -> tuple[Scalar, Scalar]:
    # Hermitian [[p, q], [conj q, p]]: eigenvalues p -+ |q|, via trace and determinant
    if vs.exact:
        a2 = vs.alpha_abs_sq_coeff
        p = th - 2 * a2
        tr, det = 2 * p, p * p - 4 * a2 * a2
        root = _exact_sqrt(tr * tr / 4 - det)
        if root is not None:
            return tr / 2 - root, tr / 2 + root
    block = fourier_block(vs, float(th)) / PI2
    tr = float(np.real(block[0, 0] + block[1, 1]))
    det = float(np.real(block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0]))
    disc = math.sqrt(max(tr * tr / 4 - det, 0.0))
    return tr / 2 - disc, tr / 2 + disc


def fourier_block_spectrum(
    vs: VacuumSolution, K: int, variant: Variant = Variant.DUAL
) -> FourierBlockResult:
    """Diagonalise every mode block with ``|k|, |l| <= K`` and classify the eigenvalues.

    Frequencies come from :func:`mode_basis`, not from the quadratic
    form coefficients. Zero detection is exact on the exact backend, else
    ``|lambda| <= 1e-9 * 4|alpha|^2``.
    """
    variant = Variant(variant)
    lat = vs.lattice
    need = bounding_box(theta_form(lat, variant), threshold(vs))
    if K < max(need):
        raise BoxTooSmall(f"box K={K} excludes modes with non-positive eigenvalues; need K >= {max(need)}")
    band = 0 if vs.exact else ZERO_REL_TOL * 4 * float(vs.alpha_abs_sq_coeff)
    blocks = []
    neg = zero = pos = 0
    # symmetric modes share theta, so each distinct block is diagonalised once
    cache: dict = {}
    (ux, uy), (vx, vy) = mode_basis(lat, variant)
    for k in range(-K, K + 1):
        for l in range(-K, K + 1):
            xi_x, xi_y = k * ux + l * vx, k * uy + l * vy
            th = xi_x * xi_x + xi_y * xi_y
            if th not in cache:
                cache[th] = _block_eigs(vs, th)
            lo, hi = cache[th]
            blocks.append(BlockEigen(k, l, th, lo, hi))
            for ev in (lo, hi):
                if abs(ev) <= band:
                    zero += 1
                elif ev < 0:
                    neg += 1
                else:
                    pos += 1
    return FourierBlockResult(tuple(blocks), neg, zero, pos, variant, vs.exact and all(
        isinstance(b.low_coeff, Fraction) for b in blocks
    ))


# ---------------------------------------------------------------- finite differences


def fd_stencil(vs: VacuumSolution, N: int) -> dict[tuple[int, int], np.ndarray]:
    """Stencil of the discretised Jacobi operator on ``(Re f, Im f)``.

    Grid points ``z = (i omega1 + j omega2)/N`` with periodic wrap. The
    Laplacian in lattice coordinates is ``g^ss d_ss + 2 g^st d_st + g^tt d_tt``
    with the inverse Gram matrix as constant coefficients; second-order
    centred differences. Maps offset ``(di, dj)`` to a 2x2 real block.
    """
    lat = vs.lattice
    det = float(lat.cross) ** 2
    gss, gst, gtt = float(lat.norm2_sq) / det, -float(lat.dot) / det, float(lat.norm1_sq) / det
    h2 = N * N
    lap = {
        (0, 0): -2 * (gss + gtt) * h2,
        (1, 0): gss * h2,
        (-1, 0): gss * h2,
        (0, 1): gtt * h2,
        (0, -1): gtt * h2,
        (1, 1): 0.5 * gst * h2,
        (-1, -1): 0.5 * gst * h2,
        (1, -1): -0.5 * gst * h2,
        (-1, 1): -0.5 * gst * h2,
    }
    a2 = abs(vs.alpha) ** 2
    c = vs.alpha * np.conj(vs.beta)
    # -2|alpha|^2 f - 2 alpha conj(beta) conj(f), split into real and imaginary parts
    reaction = np.array(
        [[-2 * a2 - 2 * c.real, -2 * c.imag], [-2 * c.imag, -2 * a2 + 2 * c.real]]
    )
    stencil = {off: -0.25 * w * np.eye(2) for off, w in lap.items() if w != 0}
    stencil[(0, 0)] = stencil.get((0, 0), np.zeros((2, 2))) + reaction
    return stencil


def fd_matrix(vs: VacuumSolution, N: int) -> np.ndarray:
    """Dense ``2N^2 x 2N^2`` real symmetric matrix assembled from :func:`fd_stencil`."""
    stencil = fd_stencil(vs, N)
    size = 2 * N * N
    H = np.zeros((size, size))
    for i in range(N):
        for j in range(N):
            row = 2 * (i * N + j)
            for (di, dj), blk in stencil.items():
                col = 2 * (((i + di) % N) * N + (j + dj) % N)
                H[row : row + 2, col : col + 2] += blk
    return H


def fd_block_eigenvalues(vs: VacuumSolution, N: int) -> np.ndarray:
    """All ``2N^2`` eigenvalues of :func:`fd_matrix`, ascending.

    The matrix commutes with grid translations, so plane waves with grid
    wavenumber ``(p, q)`` reduce it to 2x2 Hermitian blocks. Each block is
    embedded as a real 4x4 symmetric matrix (every eigenvalue doubled) and
    diagonalised by cyclic Jacobi rotations.
    """
    stencil = fd_stencil(vs, N)
    p = np.arange(N)[:, None]
    q = np.arange(N)[None, :]
    herm = np.zeros((N, N, 2, 2), dtype=complex)
    for (di, dj), blk in stencil.items():
        phase = np.exp(2j * np.pi * (p * di + q * dj) / N)
        herm += phase[..., None, None] * blk
    real4 = np.block([[herm.real, -herm.imag], [herm.imag, herm.real]])
    eig4 = batched_jacobi_eigh(real4.reshape(-1, 4, 4))
    return np.sort(eig4[:, ::2].ravel())


@dataclass(frozen=True)
class FdSpectrum:
    N: int
    eigenvalues: np.ndarray
    negatives: int
    near_zero: int
    positives: int
    zero_band: float
    predicted_gap: float
    constant_mode_eigenvalue: float


def _predicted_gap(vs: VacuumSolution) -> float:
    """Smallest non-zero ``|lambda|`` of the closed-form spectrum over both forms."""
    thr = float(threshold(vs))
    tol = vs.lattice.tol
    gap = math.inf
    for variant in Variant:
        form = theta_form(vs.lattice, variant)
        lam_max = PI2 * (thr + 2 * max(float(form.a), float(form.c)))
        for e in enumerate_spectrum(vs, lam_max, variant):
            for lam in (e.lambda_minus_coeff, e.lambda_plus_coeff):
                nonzero = lam != 0 if vs.exact else abs(float(lam)) > tol * max(thr, 1.0)
                if nonzero:
                    gap = min(gap, PI2 * abs(float(lam)))
    return gap


def _symbol_error(vs: VacuumSolution, N: int) -> float:
    """Largest stencil truncation error over lattice modes inside the threshold ellipse.

    On ``exp(2 pi i (k s + l t))`` the centred stencils give
    ``d_ss -> -4 N^2 sin^2(pi k / N)`` and
    ``d_st -> -N^2 sin(2 pi k / N) sin(2 pi l / N)``; the continuum
    values are ``-(2 pi k)^2`` and ``-(2 pi)^2 k l``.
    """
    lat = vs.lattice
    det = float(lat.cross) ** 2
    gss, gst, gtt = float(lat.norm2_sq) / det, -float(lat.dot) / det, float(lat.norm1_sq) / det
    form = theta_form(lat, Variant.DUAL)
    level = max(float(threshold(vs)), float(form.a), float(form.c)) * (1 + 1e-9)
    K, L = bounding_box(form, level)
    worst = 0.0
    for k in range(-K, K + 1):
        for l in range(-L, L + 1):
            if float(form(k, l)) > level:
                continue
            sk, sl = math.pi * k / N, math.pi * l / N
            discrete = N * N * (
                gss * math.sin(sk) ** 2 + gtt * math.sin(sl) ** 2 + 0.5 * gst * math.sin(2 * sk) * math.sin(2 * sl)
            )
            continuum = math.pi**2 * (gss * k * k + 2 * gst * k * l + gtt * l * l)
            worst = max(worst, abs(discrete - continuum))
    return worst


def fd_spectrum(vs: VacuumSolution, N: int) -> FdSpectrum:
    """Finite-difference Jacobi spectrum and its (negative, near-zero, positive) counts.

    The near-zero band is ``max(2 e_N, 1e3 |lambda_0|)`` where ``e_N`` is the
    stencil truncation error (``O(1/N^2)``) for modes up to the threshold ellipse and
    ``lambda_0`` is the computed eigenvalue of the block carrying the
    constant mode (an exact discrete null vector).
    """
    if N < 8:
        raise GridTooCoarse(f"grid N={N} is too coarse; need N >= 8")
    eigs = fd_block_eigenvalues(vs, N)
    const_block = _constant_block(vs, N)
    lam0 = float(np.min(np.abs(batched_jacobi_eigh(const_block[None])[0])))
    band = max(2 * _symbol_error(vs, N), 1e3 * lam0, 1e-12)
    gap = _predicted_gap(vs)
    if band >= gap / 2:
        raise GridTooCoarse(
            f"grid N={N}: zero band {band:.3g} does not resolve the predicted spectral gap {gap:.3g}"
        )
    neg = int(np.sum(eigs < -band))
    near = int(np.sum(np.abs(eigs) <= band))
    return FdSpectrum(N, eigs, neg, near, eigs.size - neg - near, band, gap, lam0)


def _constant_block(vs: VacuumSolution, N: int) -> np.ndarray:
    return sum(fd_stencil(vs, N).values())


# ---------------------------------------------------------------- energy


def _phi_and_derivatives(vs: VacuumSolution, z: np.ndarray):
    """``phi``, ``d phi/dx``, ``d phi/dy`` by differentiating the closed-form exponential."""
    al, be = vs.alpha, vs.beta
    zb = np.conj(z)
    a = -2 * z * al + 2 * zb * np.conj(be)
    b = -2 * z * be + 2 * zb * np.conj(al)
    da = {"x": -2 * al + 2 * np.conj(be), "y": -2j * al - 2j * np.conj(be)}
    db = {"x": -2 * be + 2 * np.conj(al), "y": -2j * be - 2j * np.conj(al)}
    u = a * b
    small = np.abs(u) < 1e-3
    w = np.sqrt(np.where(small, 1.0, u))
    ch = np.where(small, 1 + u / 2 + u**2 / 24 + u**3 / 720, np.cosh(w))
    sh = np.where(small, 1 + u / 6 + u**2 / 120 + u**3 / 5040, np.sinh(w) / w)
    # d(sinh w / w)/du, series near u = 0 to avoid cancellation
    dsh = np.where(small, 1 / 6 + u / 60 + u**2 / 2520 + u**3 / 181440, (ch - sh) / (2 * np.where(small, 1.0, u)))
    phi = expm_offdiag(a, b)
    out = {}
    for axis in ("x", "y"):
        du = da[axis] * b + a * db[axis]
        d = np.zeros(z.shape + (2, 2), dtype=complex)
        d[..., 0, 0] = d[..., 1, 1] = 0.5 * sh * du
        d[..., 0, 1] = dsh * du * a + sh * da[axis]
        d[..., 1, 0] = dsh * du * b + sh * db[axis]
        out[axis] = d
    return phi, out["x"], out["y"]


def _norm_sq(X: np.ndarray) -> np.ndarray:
    # |X|^2 = -1/2 trace(X X)
    return -0.5 * np.real(np.einsum("...ij,...ji->...", X, X))


def lattice_grid(lat: TorusLattice, N: int) -> np.ndarray:
    s = np.arange(N) / N
    S, T = np.meshgrid(s, s, indexing="ij")
    return S * lat.omega1 + T * lat.omega2


def energy_quadrature(vs: VacuumSolution, N: int = 32) -> float:
    """Energy by the trapezoidal rule on the periodic fundamental domain."""
    if N < 4:
        raise ValueError("need N >= 4")
    z = lattice_grid(vs.lattice, N)
    phi, phx, phy = _phi_and_derivatives(vs, z)
    phinv = np.conj(np.swapaxes(phi, -1, -2))
    integrand = 0.5 * (_norm_sq(phinv @ phx) + _norm_sq(phinv @ phy))
    return float(np.mean(integrand) * float(vs.lattice.area))


def energy_integrand(vs: VacuumSolution, N: int = 32) -> np.ndarray:
    z = lattice_grid(vs.lattice, N)
    phi, phx, phy = _phi_and_derivatives(vs, z)
    phinv = np.conj(np.swapaxes(phi, -1, -2))
    return _norm_sq(phinv @ phx) + _norm_sq(phinv @ phy)


# ---------------------------------------------------------------- residuals


def jacobi_operator_algebraic(vs: VacuumSolution, v: np.ndarray) -> np.ndarray:
    """``[A, [Abar, v]]`` for a stack of 2x2 matrices."""
    A, Abar = a_matrix(vs)
    inner = Abar @ v - v @ Abar
    return A @ inner - inner @ A


def constant_kernel_vector(vs: VacuumSolution) -> complex:
    """Unit ``f0`` with ``[A, [Abar, msp(f0)]] = 0``."""
    cols = []
    for f in (1.0, 1j):
        img = jacobi_operator_algebraic(vs, msp(f))[0, 1]
        cols.append([img.real, img.imag])
    M = np.array(cols).T
    _, _, vh = np.linalg.svd(M)
    x, y = vh[-1]
    return complex(x, y)


def jacobi_residual(
    vs: VacuumSolution,
    mode: str | tuple[int, int] = "constant",
    variant: Variant = Variant.DUAL,
    samples: int = 9,
) -> float:
    """Max norm of ``J(v) = -1/4 Lap v + [A, [Abar, v]]`` over a sample grid.

    ``mode`` is ``"constant"`` for the kernel direction of ``ad_A ad_Abar``
    or a lattice point ``(k, l)`` on the threshold ellipse, whose field is
    built from the null vector of its 2x2 block. The Laplacian of a plane
    wave is applied analytically.
    """
    lat = vs.lattice
    z = lattice_grid(lat, samples)
    if mode == "constant":
        v = msp(np.full(z.shape, constant_kernel_vector(vs)))
        return float(np.max(np.linalg.norm(jacobi_operator_algebraic(vs, v), axis=(-2, -1))))
    k, l = mode
    variant = Variant(variant)
    th = theta_form(lat, variant)(k, l)
    thr = threshold(vs)
    on_ellipse = th == thr if vs.exact else abs(float(th) - float(thr)) <= lat.tol * max(float(thr), 1e-300)
    if not on_ellipse:
        raise NotANullMode(f"mode ({k}, {l}) has theta={th} but the threshold is {thr}")
    xi = np.array([float(c) for c in mode_frequency(lat, k, l, variant)])
    xi_sq = float(xi @ xi)
    _, _, vh = np.linalg.svd(fourier_block(vs, xi_sq))
    x, y = np.conj(vh[-1])
    phase = np.exp(2j * np.pi * (xi[0] * z.real + xi[1] * z.imag))
    f = x * phase + np.conj(y) * np.conj(phase)
    v = msp(f)
    Jv = PI2 * xi_sq * v + jacobi_operator_algebraic(vs, v)
    scale = float(np.max(np.abs(f))) or 1.0
    return float(np.max(np.linalg.norm(Jv, axis=(-2, -1)))) / scale


# integer weights, divided by 12 after summation so constant data cancel exactly
_D1 = np.array([1, -8, 0, 8, -1])
_D2 = np.array([-1, 16, -30, 16, -1])


def harmonicity_residual(vs: VacuumSolution, N: int = 64, samples: int = 5) -> float:
    """Max norm of ``d_zbar(phi^-1 phi_z) + d_z(phi^-1 phi_zbar)`` by finite differences.

    Uses the expanded form ``(phi^-1 Lap phi - X^2 - Y^2)/2`` with
    ``X = phi^-1 phi_x``, ``Y = phi^-1 phi_y`` and fourth-order centred
    differences of step ``min|omega_j| / N``.
    """
    if N < 8:
        raise ValueError("need N >= 8")
    lat = vs.lattice
    h = min(abs(lat.omega1), abs(lat.omega2)) / N
    z0 = lattice_grid(lat, samples).ravel()
    offs = np.arange(-2, 3)
    worst = 0.0
    phi0 = evaluate(vs, z0)
    phinv = np.conj(np.swapaxes(phi0, -1, -2))
    lap = np.zeros_like(phi0)
    sq = np.zeros_like(phi0)
    for direction in (1.0, 1j):
        pts = evaluate(vs, z0[:, None] + direction * h * offs[None, :])
        d1 = np.einsum("j,njab->nab", _D1, pts) / (12 * h)
        d2 = np.einsum("j,njab->nab", _D2, pts) / (12 * h**2)
        X = phinv @ d1
        lap += phinv @ d2
        sq += X @ X
    res = 0.5 * (lap - sq)
    worst = float(np.max(np.linalg.norm(res, axis=(-2, -1))))
    return worst


def map_residuals(vs: VacuumSolution, points: int = 100, seed: int = 0) -> dict[str, float]:
    """Periodicity, unitarity and determinant defects of the map at random points."""
    rng = np.random.default_rng(seed)
    lat = vs.lattice
    st = rng.random((points, 2))
    z = st[:, 0] * lat.omega1 + st[:, 1] * lat.omega2
    phi = evaluate(vs, z)
    eye = np.eye(2)
    return {
        "periodicity": float(
            max(
                np.max(np.linalg.norm(evaluate(vs, z + w) - phi, axis=(-2, -1)))
                for w in (lat.omega1, lat.omega2)
            )
        ),
        "unitarity": float(np.max(np.linalg.norm(phi @ np.conj(np.swapaxes(phi, -1, -2)) - eye, axis=(-2, -1)))),
        "determinant": float(np.max(np.abs(np.linalg.det(phi) - 1))),
    }
