"""Vacuum harmonic maps from a flat torus to the round 2-sphere.

The map is realised inside SU(2) through the Cartan embedding,
``phi(z) = exp(-2 z A - 2 conj(z) Abar)`` with ``A = [[0, alpha], [beta, 0]]``
and ``Abar = -A^*``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .lattice import Scalar, TorusLattice

# conjugation by Q is the involution fixing the diagonal subgroup
Q = np.diag([1.0 + 0j, -1.0 + 0j])

_SERIES_CUTOFF = 1e-24


def expm_offdiag(a, b) -> np.ndarray:
    """``exp([[0, a], [b, 0]])`` in closed form, broadcasting over array inputs.

    With ``w^2 = a b`` the exponential is ``cosh(w) I + sinh(w)/w M``; both
    coefficients are even in ``w`` so the branch of the root is irrelevant.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    ab = a * b
    small = np.abs(ab) < _SERIES_CUTOFF
    w = np.sqrt(np.where(small, 1.0, ab))
    ch = np.where(small, 1.0, np.cosh(w))
    sh = np.where(small, 1.0, np.sinh(w) / w)
    out = np.empty(ab.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = ch
    out[..., 1, 1] = ch
    out[..., 0, 1] = sh * a
    out[..., 1, 0] = sh * b
    return out


def msp(f) -> np.ndarray:
    """Matrix ``[[0, f], [-conj(f), 0]]`` of the tangent space at the base point."""
    f = np.asarray(f, dtype=complex)
    out = np.zeros(f.shape + (2, 2), dtype=complex)
    out[..., 0, 1] = f
    out[..., 1, 0] = -np.conj(f)
    return out


@dataclass(frozen=True)
class VacuumSolution:
    """Vacuum solution on the torus ``lattice`` with frequency integers ``(n, m)``.

    ``p_re + i p_im`` is ``conj(omega2) n + conj(omega1) m``. Energy and
    ``|alpha|^2`` are rational multiples of ``pi^2`` on the exact backend and
    are stored as those multiples (``energy_coeff``, ``alpha_abs_sq_coeff``).
    """

    lattice: TorusLattice
    n: int
    m: int
    p_re: Scalar
    p_im: Scalar
    energy_coeff: Scalar
    alpha_abs_sq_coeff: Scalar
    alpha: complex
    beta: complex

    @property
    def exact(self) -> bool:
        return self.lattice.exact

    @property
    def p_abs_sq(self) -> Scalar:
        return self.p_re * self.p_re + self.p_im * self.p_im

    @property
    def sqrt_ab(self) -> complex:
        """``pi i (conj(w2) n + conj(w1) m) / (conj(w2) w1 - w2 conj(w1))``."""
        p = complex(float(self.p_re), float(self.p_im))
        return math.pi * 1j * p / self.lattice.wronskian

    @property
    def energy(self) -> float:
        return math.pi**2 * float(self.energy_coeff)

    @property
    def alpha_abs_sq(self) -> float:
        return math.pi**2 * float(self.alpha_abs_sq_coeff)

    @property
    def is_constant(self) -> bool:
        return self.n == 0 and self.m == 0

    def with_gauge(self, phase: float) -> "VacuumSolution":
        """Same solution with ``alpha = s e^{i phase}``, ``beta = s e^{-i phase}``."""
        s = self.sqrt_ab
        return replace(self, alpha=s * cmath.exp(1j * phase), beta=s * cmath.exp(-1j * phase))


def build(lat: TorusLattice, n: int, m: int) -> VacuumSolution:
    """Vacuum solution doubly periodic on ``lat``, gauge fixed to ``alpha = beta``."""
    n, m = int(n), int(m)
    p_re = lat.w2x * n + lat.w1x * m
    p_im = -(lat.w2y * n + lat.w1y * m)
    p_abs_sq = p_re * p_re + p_im * p_im
    cross = lat.cross
    # E / pi^2 = 4|P|^2 / |W| with |W| = 2|cross|
    energy_coeff = 2 * p_abs_sq / abs(cross)
    alpha_abs_sq_coeff = p_abs_sq / (4 * cross * cross)
    vs = VacuumSolution(lat, n, m, p_re, p_im, energy_coeff, alpha_abs_sq_coeff, 0j, 0j)
    s = vs.sqrt_ab
    return replace(vs, alpha=s, beta=s)


def a_matrix(vs: VacuumSolution) -> tuple[np.ndarray, np.ndarray]:
    """``(A, Abar)`` with ``Abar = -A^*``."""
    A = np.array([[0, vs.alpha], [vs.beta, 0]], dtype=complex)
    return A, -A.conj().T


def _exponent_entries(vs: VacuumSolution, z, scale: float):
    # scale * (z A + conj(z) Abar), off-diagonal entries only
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    a = scale * (z * vs.alpha - zb * np.conj(vs.beta))
    b = scale * (z * vs.beta - zb * np.conj(vs.alpha))
    return a, b


def frame(vs: VacuumSolution, z) -> np.ndarray:
    """``F_A(z) = exp(z A + conj(z) Abar)``."""
    return expm_offdiag(*_exponent_entries(vs, z, 1.0))


def evaluate(vs: VacuumSolution, z) -> np.ndarray:
    """``phi_A(z) = exp(-2 z A - 2 conj(z) Abar)`` as an SU(2) matrix (broadcasts over ``z``)."""
    return expm_offdiag(*_exponent_entries(vs, z, -2.0))


def cartan_image(F: np.ndarray) -> np.ndarray:
    """``sigma(F) F^{-1}`` where ``sigma`` is conjugation by ``Q``."""
    Finv = np.conj(np.swapaxes(F, -1, -2))
    return Q @ F @ Q @ Finv


def sphere_point(phi: np.ndarray) -> np.ndarray:
    """Point of S^2 in R^3 for an element of the Cartan image.

    ``Q phi`` equals ``F Q F^{-1}``, a traceless Hermitian matrix with
    eigenvalues +-1; its Pauli coordinates are the point.
    """
    H = Q @ phi
    x = np.real(H[..., 0, 1] + H[..., 1, 0]) / 2
    y = np.real(1j * (H[..., 0, 1] - H[..., 1, 0])) / 2
    zc = np.real(H[..., 0, 0] - H[..., 1, 1]) / 2
    return np.stack([x, y, zc], axis=-1)
