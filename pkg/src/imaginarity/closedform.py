"""Mixed-state imaginarity measures that need no roof: relative entropy,
fidelity, Tsallis, and the robustness via bisection.

Qubit oracle for the robustness: for ``Y = -Im rho / s`` the state
``tau = [[a, c + i y], [c - i y, 1 - a]]`` is PSD iff ``a (1 - a) >= c^2 + y^2``,
best at ``a = 1/2, c = 0``. So ``s`` is feasible iff ``|Im rho_12| / s <= 1/2``
and the robustness is ``2 |Im rho_12|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from . import numkernel
from .errors import NoConvergence, ParamOutOfRange
from .states import as_density

FEASIBLE_TOL = 1e-8
ASCENT_ITERS = 5000
BRACKET_CAP = 2.0 ** 10


def rel_entropy_imaginarity(rho) -> float:
    """S(Re rho) - S(rho), in bits."""
    rho = as_density(rho)
    value = numkernel.von_neumann_entropy(rho.real.astype(np.complex128)) - numkernel.von_neumann_entropy(rho)
    return float(max(0.0, value))


def fidelity_imaginarity(rho) -> float:
    """1 - F(rho, rho*) with the root fidelity F."""
    rho = as_density(rho)
    return float(min(1.0, max(0.0, 1.0 - numkernel.root_fidelity(rho, rho.conj()))))


def tsallis_imaginarity(rho, mu: float) -> float:
    """1 - Tr[rho^mu (rho*)^(1 - mu)]."""
    if not 0.0 < mu < 1.0:
        raise ParamOutOfRange(f"mu = {mu} not in (0, 1)")
    rho = as_density(rho)
    a = numkernel.psd_power(rho, mu)
    b = numkernel.psd_power(rho.conj(), 1.0 - mu)
    value = 1.0 - float(np.trace(a @ b).real)
    return float(min(1.0, max(0.0, value)))


@dataclass
class RobustnessResult:
    s: float
    witness_tau: np.ndarray
    iterations: int


@numba.njit(cache=True)
def _max_min_eig(Y, iters, target):
    """Projected subgradient ascent of lambda_min(R + iY) over real symmetric
    R with unit trace. Stops early once ``target`` is reached; returns the
    best value and its R."""
    d = Y.shape[0]
    R = np.eye(d) / d
    best = -np.inf
    best_R = R.copy()
    for t in range(1, iters + 1):
        H = R + 1j * Y
        A, V, _, _ = numkernel._jacobi(H.astype(np.complex128), 1e-14, 100)
        k = 0
        for i in range(1, d):
            if A[i, i].real < A[k, k].real:
                k = i
        lam = A[k, k].real
        if lam > best:
            best = lam
            best_R = R.copy()
            if best >= target:
                break
        v = V[:, k]
        G = np.empty((d, d))
        for i in range(d):
            for j in range(d):
                G[i, j] = (v[i] * np.conj(v[j])).real
        for i in range(d):
            G[i, i] -= 1.0 / d
        R = R + G / math.sqrt(t)
    return best, best_R


def _feasible(im: np.ndarray, s: float):
    Y = -im / s
    best, R = _max_min_eig(Y, ASCENT_ITERS, -FEASIBLE_TOL)
    return best >= -FEASIBLE_TOL, R + 1j * Y


def robustness_imaginarity(rho, tol: float = 1e-6) -> RobustnessResult:
    """Smallest s >= 0 such that (rho + s tau) / (1 + s) is real for some
    state tau, by bisection over a PSD feasibility test."""
    rho = as_density(rho)
    im = np.ascontiguousarray(rho.imag)
    scale = float(np.max(np.abs(im)))
    if scale <= 1e-12:
        return RobustnessResult(0.0, rho.real.astype(np.complex128), 0)
    d = rho.shape[0]
    hi = 2.0 * d * scale
    ok, tau = _feasible(im, hi)
    while not ok:
        hi *= 2.0
        if hi > BRACKET_CAP:
            raise NoConvergence("no feasible robustness bracket below 2^10")
        ok, tau = _feasible(im, hi)
    lo = 0.0
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        ok, cand = _feasible(im, mid)
        if ok:
            hi, tau = mid, cand
        else:
            lo = mid
        it += 1
    return RobustnessResult(hi, tau, it)


def qubit_robustness(rho) -> float:
    """Closed-form robustness of a qubit state, 2 |Im rho_12|."""
    rho = as_density(rho)
    if rho.shape != (2, 2):
        raise ParamOutOfRange("qubit formula needs a 2x2 state")
    return 2.0 * abs(float(rho[0, 1].imag))
