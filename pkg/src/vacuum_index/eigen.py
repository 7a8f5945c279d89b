"""Cyclic Jacobi eigensolver for real symmetric matrices."""

from __future__ import annotations

import numpy as np

OFF_TOL = 1e-12
MAX_SWEEPS = 60


def _off_norm(a: np.ndarray) -> np.ndarray:
    off = a * (1.0 - np.eye(a.shape[-1]))
    return np.sqrt(np.sum(off * off, axis=(-2, -1)))


def _rotation(app, aqq, apq):
    # Rutishauser's formulas: t = tan(phi) of the smaller rotation angle
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = (aqq - app) / (2.0 * apq)
        t = np.sign(tau) / (np.abs(tau) + np.hypot(1.0, tau))
    t = np.where(tau == 0, 1.0, t)
    t = np.where(apq == 0, 0.0, t)
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def jacobi_eigh(a: np.ndarray, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, int]:
    """Eigenvalues (ascending) of a symmetric matrix by cyclic Jacobi sweeps.

    Iterates row-cyclic sweeps until the off-diagonal Frobenius norm falls
    below ``tol * ||a||_F``. Returns the eigenvalues and the sweep count.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("expected a square matrix")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ValueError("matrix is not symmetric")
    scale = np.linalg.norm(a) or 1.0
    sweeps = 0
    while _off_norm(a) > tol * scale:
        if sweeps >= max_sweeps:
            raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                c, s = _rotation(a[p, p], a[q, q], apq)
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * rp - s * rq, s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * cp - s * cq, s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
        sweeps += 1
    return np.sort(np.diag(a)), sweeps


def batched_jacobi_eigh(a: np.ndarray, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a stack ``(..., n, n)`` of small symmetric matrices, ascending per matrix."""
    a = np.array(a, dtype=float, copy=True)
    shape = a.shape
    n = shape[-1]
    a = a.reshape(-1, n, n)
    scale = np.linalg.norm(a, axis=(-2, -1))
    scale[scale == 0] = 1.0
    for _ in range(max_sweeps):
        if np.all(_off_norm(a) <= tol * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                c, s = _rotation(a[:, p, p], a[:, q, q], a[:, p, q])
                c, s = c[:, None], s[:, None]
                rp, rq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :], a[:, q, :] = c * rp - s * rq, s * rp + c * rq
                cp, cq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p], a[:, :, q] = c * cp - s * cq, s * cp + c * cq
                a[:, p, q] = a[:, q, p] = 0.0
    else:
        if np.any(_off_norm(a) > tol * scale):
            raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    return np.sort(np.einsum("bii->bi", a), axis=-1).reshape(shape[:-1])
