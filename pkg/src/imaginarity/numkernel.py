"""Dense Hermitian linear algebra: a cyclic Jacobi eigensolver and the
spectral functions built on it (PSD functional calculus, entropy, fidelity).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD

HERMITIAN_TOL = 1e-8
CLAMP_TOL = 1e-10
PSD_TOL = 1e-8
JACOBI_TOL = 1e-14
JACOBI_SWEEPS = 100


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # unitary, columns
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


@numba.njit(cache=True)
def _jacobi(H, tol, max_sweeps):
    n = H.shape[0]
    A = H.copy()
    V = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += A[i, j].real ** 2 + A[i, j].imag ** 2
    scale = math.sqrt(scale)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j].real ** 2 + A[i, j].imag ** 2
        off = math.sqrt(off)
        if off <= tol * scale or off == 0.0:
            return A, V, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                ph = apq / mag
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phc = np.conj(ph)
                # A <- A J with J = [[c, s], [-s*conj(ph), c*conj(ph)]] on (p, q)
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * phc * akq
                    A[k, q] = s * akp + c * phc * akq
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * phc * vkq
                    V[k, q] = s * vkp + c * phc * vkq
                # A <- J^dagger A
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * ph * aqk
                    A[q, k] = s * apk + c * ph * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    return A, V, max_sweeps, False


def _as_square(H) -> np.ndarray:
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise ValueError("matrix has non-finite entries")
    return H


def eig_hermitian(H, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_SWEEPS) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in ascending order. Raises ``NotHermitian`` when
    ``max|H - H^dagger| > 1e-8`` and ``NoConvergence`` when the off-diagonal
    Frobenius mass is still above ``tol * ||H||_F`` after ``max_sweeps``.
    """
    H = _as_square(H)
    asym = np.max(np.abs(H - H.conj().T)) if H.size else 0.0
    if asym > HERMITIAN_TOL:
        raise NotHermitian(f"max |H - H^dagger| = {asym:.3g}")
    H = 0.5 * (H + H.conj().T)
    A, V, sweeps, ok = _jacobi(H, tol, max_sweeps)
    if not ok:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return Spectrum(w[order], V[:, order], sweeps)


def _psd_spectrum(A, rank_tol: float = 0.0):
    spec = eig_hermitian(A)
    w = spec.eigenvalues
    if w.size and w[0] < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3g}")
    w = np.where(w < rank_tol, 0.0, np.maximum(w, 0.0))
    return w, spec.eigenvectors


def func_psd(A, g, rank_tol: float = 0.0) -> np.ndarray:
    """Apply a scalar function to a PSD matrix through its spectrum.

    Eigenvalues in ``[-1e-8, 0)`` are clamped to zero; anything more negative
    raises ``NotPSD``. Eigenvalues below ``rank_tol`` are also zeroed, which
    suppresses noise before fractional powers.
    """
    w, V = _psd_spectrum(A, rank_tol)
    gw = np.asarray(g(w), dtype=float)
    return (V * gw) @ V.conj().T


def psd_power(A, mu: float, rank_tol: float = CLAMP_TOL) -> np.ndarray:
    def power(w):
        out = np.zeros_like(w)
        pos = w > 0
        out[pos] = w[pos] ** mu
        return out

    return func_psd(A, power, rank_tol=rank_tol)


def psd_sqrt(A, rank_tol: float = 0.0) -> np.ndarray:
    return func_psd(A, np.sqrt, rank_tol=rank_tol)


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, with 0 log 0 = 0."""
    w, _ = _psd_spectrum(rho)
    w = w[w > 0]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def psd_factor(A, rank_tol: float = CLAMP_TOL) -> np.ndarray:
    """Return ``W`` (d x r) with ``W W^dagger = A`` from the retained spectrum."""
    w, V = _psd_spectrum(A)
    keep = w > rank_tol
    return V[:, keep] * np.sqrt(w[keep])


def root_fidelity(rho, sigma, rank_tol: float = CLAMP_TOL) -> float:
    """Tr sqrt(sqrt(rho) sigma sqrt(rho)), computed as the nuclear norm of
    ``W_rho^dagger W_sigma`` for PSD factors of the two states.

    Eigenvalues below ``rank_tol`` are dropped; otherwise round-off of order
    1e-17 would enter as its square root.
    """
    rho = _as_square(rho)
    sigma = _as_square(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"{rho.shape} vs {sigma.shape}")
    Wr = psd_factor(rho, rank_tol)
    Ws = psd_factor(sigma, rank_tol)
    if Wr.shape[1] == 0 or Ws.shape[1] == 0:
        return 0.0
    sv = np.linalg.svd(Wr.conj().T @ Ws, compute_uv=False)
    return float(min(1.0, np.sum(sv)))
