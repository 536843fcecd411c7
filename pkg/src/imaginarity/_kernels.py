"""Compiled inner loops for the roof searches.

Every built-in f is evaluated from the pair ``(x, u)`` with ``u = 1 - x``
supplied separately, because ``1 - x`` recovered by subtraction loses half
the digits inside square roots near ``x = 1``.
"""
import math

import numba
import numpy as np

GEOMETRIC, ROBUSTNESS_ROW, ENTROPY, FIDELITY_ROW, TSALLIS, L2, FK, TABULATED = range(8)

MODE_ROOF = 0
MODE_DEFICIT = 1


@numba.njit(cache=True)
def f_value(code, fp, x, u):
    if x > 1.0:
        x = 1.0
    if x < 0.0:
        x = 0.0
    if u < 0.0:
        u = 0.0
    if u > 1.0:
        u = 1.0
    if code == GEOMETRIC:
        return 0.5 * u
    if code == ROBUSTNESS_ROW:
        return 0.5 * math.sqrt(u * (1.0 + x))
    if code == ENTROPY:
        b = 0.5 * u
        a = 1.0 - b
        s = 0.0
        if b > 0.0:
            s -= b * math.log2(b)
        if a > 0.0:
            s -= a * math.log1p(-b) / math.log(2.0)
        return s
    if code == FIDELITY_ROW:
        return u
    if code == TSALLIS:
        return u * (1.0 + x)
    if code == L2:
        return math.sqrt(0.5 * u * (1.0 + x))
    if code == FK:
        v = u / fp[0]
        return v if v < 1.0 else 1.0
    if code == TABULATED:
        n = int(fp[0])
        return np.interp(x, fp[1:1 + n], fp[1 + n:1 + 2 * n])
    return np.nan


@numba.njit(cache=True)
def f_vector(code, fp, x, u):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = f_value(code, fp, x[i], u[i])
    return out


@numba.njit(cache=True)
def orthonormal_columns(params, m, r):
    """Map ``2 m r`` reals to an ``m x r`` matrix with orthonormal columns
    (Gram-Schmidt, each projection applied twice)."""
    A = np.empty((m, r), np.complex128)
    for i in range(m):
        for j in range(r):
            A[i, j] = params[2 * (i * r + j)] + 1j * params[2 * (i * r + j) + 1]
    for j in range(r):
        for _ in range(2):
            for k in range(j):
                c = 0j
                for i in range(m):
                    c += np.conj(A[i, k]) * A[i, j]
                for i in range(m):
                    A[i, j] -= c * A[i, k]
        nrm = 0.0
        for i in range(m):
            nrm += A[i, j].real ** 2 + A[i, j].imag ** 2
        nrm = math.sqrt(nrm)
        if nrm < 1e-150:
            # degenerate column: replace by a unit vector orthogonal to the rest
            for t in range(m):
                for i in range(m):
                    A[i, j] = 0.0
                A[t, j] = 1.0
                for _ in range(2):
                    for k in range(j):
                        c = 0j
                        for i in range(m):
                            c += np.conj(A[i, k]) * A[i, j]
                        for i in range(m):
                            A[i, j] -= c * A[i, k]
                nrm = 0.0
                for i in range(m):
                    nrm += A[i, j].real ** 2 + A[i, j].imag ** 2
                nrm = math.sqrt(nrm)
                if nrm > 0.5:
                    break
        for i in range(m):
            A[i, j] /= nrm
    return A


@numba.njit(cache=True)
def branch_stats(M, W):
    """For branches ``psi_i = W M[i]^T`` return weights ``p_i``, conjugate
    overlaps ``|psi_i^T psi_i|`` (unnormalized) and the exact defect
    ``p_i^2 - |psi_i^T psi_i|^2 = 4 sum_{m<n} (a_m b_n - a_n b_m)^2``."""
    m, r = M.shape
    d = W.shape[0]
    p = np.empty(m)
    q = np.empty(m)
    s = np.empty(m)
    a = np.empty(d)
    b = np.empty(d)
    for i in range(m):
        for k in range(d):
            z = 0j
            for j in range(r):
                z += W[k, j] * M[i, j]
            a[k] = z.real
            b[k] = z.imag
        pn = 0.0
        re = 0.0
        im = 0.0
        for k in range(d):
            pn += a[k] * a[k] + b[k] * b[k]
            re += a[k] * a[k] - b[k] * b[k]
            im += 2.0 * a[k] * b[k]
        sq = 0.0
        for k in range(d):
            for l in range(k + 1, d):
                t = a[k] * b[l] - a[l] * b[k]
                sq += t * t
        p[i] = pn
        q[i] = math.sqrt(re * re + im * im)
        s[i] = 4.0 * sq
    return p, q, s


@numba.njit(cache=True)
def objective(params, m, r, W, mode, code, fp):
    M = orthonormal_columns(params, m, r)
    p, q, s = branch_stats(M, W)
    tot = 0.0
    for i in range(m):
        if p[i] <= 1e-300:
            continue
        # p (1 - x) with x = q / p, free of cancellation
        pu = s[i] / (p[i] + q[i])
        if mode == MODE_DEFICIT:
            tot += pu
        else:
            tot += p[i] * f_value(code, fp, q[i] / p[i], pu / p[i])
    return tot


@numba.njit(cache=True)
def nelder_mead(x0, step, maxiter, fatol, xatol, m, r, W, mode, code, fp):
    """Adaptive Nelder-Mead (dimension-dependent coefficients).

    Returns ``(x_best, f_best, iterations, converged)``.
    """
    n = x0.size
    alpha = 1.0
    gamma = 1.0 + 2.0 / n
    rho = 0.75 - 1.0 / (2.0 * n)
    sigma = 1.0 - 1.0 / n
    S = np.empty((n + 1, n))
    F = np.empty(n + 1)
    S[0] = x0
    for i in range(n):
        S[i + 1] = x0
        S[i + 1, i] += step
    for i in range(n + 1):
        F[i] = objective(S[i], m, r, W, mode, code, fp)
    it = 0
    converged = False
    xbar = np.empty(n)
    while it < maxiter:
        order = np.argsort(F)
        S = S[order]
        F = F[order]
        if F[n] - F[0] <= fatol:
            dx = 0.0
            for i in range(1, n + 1):
                for j in range(n):
                    dd = abs(S[i, j] - S[0, j])
                    if dd > dx:
                        dx = dd
            if dx <= xatol:
                converged = True
                break
        it += 1
        for j in range(n):
            xbar[j] = 0.0
        for i in range(n):
            for j in range(n):
                xbar[j] += S[i, j]
        for j in range(n):
            xbar[j] /= n
        xr = xbar + alpha * (xbar - S[n])
        fr = objective(xr, m, r, W, mode, code, fp)
        if fr < F[0]:
            xe = xbar + gamma * (xr - xbar)
            fe = objective(xe, m, r, W, mode, code, fp)
            if fe < fr:
                S[n] = xe
                F[n] = fe
            else:
                S[n] = xr
                F[n] = fr
        elif fr < F[n - 1]:
            S[n] = xr
            F[n] = fr
        else:
            if fr < F[n]:
                xc = xbar + rho * (xr - xbar)
                fc = objective(xc, m, r, W, mode, code, fp)
                accept = fc <= fr
            else:
                xc = xbar + rho * (S[n] - xbar)
                fc = objective(xc, m, r, W, mode, code, fp)
                accept = fc < F[n]
            if accept:
                S[n] = xc
                F[n] = fc
            else:
                for i in range(1, n + 1):
                    S[i] = S[0] + sigma * (S[i] - S[0])
                    F[i] = objective(S[i], m, r, W, mode, code, fp)
    b = np.argmin(F)
    return S[b].copy(), F[b], it, converged


@numba.njit(cache=True)
def local_search(x0, step, maxiter, tol, max_restarts, m, r, W, mode, code, fp):
    """Nelder-Mead restarted from its own optimum with a shrinking simplex
    until a restart improves by less than ``tol``."""
    x, fx, it, conv = nelder_mead(x0, step, maxiter, 0.01 * tol, 1e-9, m, r, W, mode, code, fp)
    for _ in range(max_restarts):
        step *= 0.5
        x2, f2, it2, conv = nelder_mead(x, step, maxiter, 0.01 * tol, 1e-9, m, r, W, mode, code, fp)
        gain = fx - f2
        if f2 < fx:
            x = x2
            fx = f2
        if gain < tol:
            break
    return x, fx, conv


# ---------------------------------------------------------------- pair sweeps

#
# Every decomposition is reachable from any other by a unitary mix of the
# branch vectors. Mixing two branches at a time, psi_i, psi_j ->
#   cos t psi_i + sin t e^{i phi} psi_j,  -sin t e^{-i phi} psi_i + cos t psi_j,
# changes only those two terms of the objective, so each move is a cheap
# two-parameter problem.

@numba.njit(cache=True)
def branch_term(psi, mode, code, fp):
    d = psi.size
    pn = 0.0
    re = 0.0
    im = 0.0
    for k in range(d):
        a = psi[k].real
        b = psi[k].imag
        pn += a * a + b * b
        re += a * a - b * b
        im += 2.0 * a * b
    if pn <= 1e-300:
        return 0.0
    sq = 0.0
    for k in range(d):
        for l in range(k + 1, d):
            t = psi[k].real * psi[l].imag - psi[l].real * psi[k].imag
            sq += t * t
    q = math.sqrt(re * re + im * im)
    pu = 4.0 * sq / (pn + q)
    if mode == MODE_DEFICIT:
        return pu
    return pn * f_value(code, fp, q / pn, pu / pn)


@numba.njit(cache=True)
def _mix(Pi, Pj, t, phi, out_i, out_j):
    c = math.cos(t)
    s = math.sin(t)
    e = complex(math.cos(phi), math.sin(phi))
    for k in range(Pi.size):
        out_i[k] = c * Pi[k] + s * e * Pj[k]
        out_j[k] = -s * np.conj(e) * Pi[k] + c * Pj[k]


@numba.njit(cache=True)
def _pair_value(Pi, Pj, t, phi, bi, bj, mode, code, fp):
    _mix(Pi, Pj, t, phi, bi, bj)
    return branch_term(bi, mode, code, fp) + branch_term(bj, mode, code, fp)


@numba.njit(cache=True)
def _pair_minimize(Pi, Pj, mode, code, fp, bi, bj, grid):
    """Best (t, phi) for one pair: optional coarse grid, then 2-D
    Nelder-Mead."""
    f0 = _pair_value(Pi, Pj, 0.0, 0.0, bi, bj, mode, code, fp)
    bt, bp, bf = 0.0, 0.0, f0
    ng = 8 if grid else 0
    for a in range(ng):
        t = (a + 0.5) * math.pi / ng - 0.5 * math.pi
        for b in range(ng):
            phi = b * 2.0 * math.pi / ng
            v = _pair_value(Pi, Pj, t, phi, bi, bj, mode, code, fp)
            if v < bf:
                bt, bp, bf = t, phi, v
    S = np.empty((3, 2))
    F = np.empty(3)
    S[0, 0] = bt
    S[0, 1] = bp
    S[1, 0] = bt + 0.1 if grid else bt + 0.02
    S[1, 1] = bp
    S[2, 0] = bt
    S[2, 1] = bp + 0.2 if grid else bp + 0.04
    for i in range(3):
        F[i] = _pair_value(Pi, Pj, S[i, 0], S[i, 1], bi, bj, mode, code, fp)
    for _ in range(400):
        order = np.argsort(F)
        S = S[order]
        F = F[order]
        if F[2] - F[0] <= 1e-15 and abs(S[2, 0] - S[0, 0]) + abs(S[2, 1] - S[0, 1]) < 1e-10:
            break
        xb0 = 0.5 * (S[0, 0] + S[1, 0])
        xb1 = 0.5 * (S[0, 1] + S[1, 1])
        r0 = 2.0 * xb0 - S[2, 0]
        r1 = 2.0 * xb1 - S[2, 1]
        fr = _pair_value(Pi, Pj, r0, r1, bi, bj, mode, code, fp)
        if fr < F[0]:
            e0 = 3.0 * xb0 - 2.0 * S[2, 0]
            e1 = 3.0 * xb1 - 2.0 * S[2, 1]
            fe = _pair_value(Pi, Pj, e0, e1, bi, bj, mode, code, fp)
            if fe < fr:
                S[2, 0], S[2, 1], F[2] = e0, e1, fe
            else:
                S[2, 0], S[2, 1], F[2] = r0, r1, fr
        elif fr < F[1]:
            S[2, 0], S[2, 1], F[2] = r0, r1, fr
        else:
            if fr < F[2]:
                c0 = 0.5 * (xb0 + r0)
                c1 = 0.5 * (xb1 + r1)
            else:
                c0 = 0.5 * (xb0 + S[2, 0])
                c1 = 0.5 * (xb1 + S[2, 1])
            fc = _pair_value(Pi, Pj, c0, c1, bi, bj, mode, code, fp)
            if fc < min(fr, F[2]):
                S[2, 0], S[2, 1], F[2] = c0, c1, fc
            else:
                for i in range(1, 3):
                    S[i, 0] = S[0, 0] + 0.5 * (S[i, 0] - S[0, 0])
                    S[i, 1] = S[0, 1] + 0.5 * (S[i, 1] - S[0, 1])
                    F[i] = _pair_value(Pi, Pj, S[i, 0], S[i, 1], bi, bj, mode, code, fp)
    k = np.argmin(F)
    if F[k] < f0:
        return S[k, 0], S[k, 1], f0 - F[k]
    return 0.0, 0.0, 0.0


@numba.njit(cache=True)
def branches_value(P, mode, code, fp):
    tot = 0.0
    for i in range(P.shape[0]):
        tot += branch_term(P[i], mode, code, fp)
    return tot


@numba.njit(cache=True)
def pair_sweeps(P, mode, code, fp, tol, max_sweeps, grid_sweeps):
    """Sweep over all branch pairs, applying the best two-branch mix to each,
    until a full sweep gains less than ``tol``. ``P`` (rows = unnormalized
    branches) is updated in place; returns ``(value, sweeps)``."""
    m, d = P.shape
    bi = np.empty(d, np.complex128)
    bj = np.empty(d, np.complex128)
    sweeps = 0
    for _ in range(max_sweeps):
        sweeps += 1
        gain = 0.0
        for i in range(m):
            for j in range(i + 1, m):
                t, phi, g = _pair_minimize(P[i], P[j], mode, code, fp, bi, bj, sweeps <= grid_sweeps)
                if g > 0.0:
                    _mix(P[i].copy(), P[j].copy(), t, phi, bi, bj)
                    P[i] = bi
                    P[j] = bj
                    gain += g
        if gain < tol:
            break
    return branches_value(P, mode, code, fp), sweeps
