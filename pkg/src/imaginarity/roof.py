"""Roof quantifiers over pure-state decompositions.

``convex_roof`` minimizes the ensemble average ``sum_i p_i f(x_i)`` of the
pure-state imaginarity; ``tilde_measure`` evaluates ``f`` at the largest
achievable average overlap ``max sum_i p_i x_i``. Both search the same space:
``m x r`` mixing matrices with orthonormal columns applied to the
eigen-ensemble (see ``states.hjw_decompositions``), explored by multi-start
Nelder-Mead.

The maximal average overlap also has a closed form, the root fidelity
``F(rho, rho*)``, reached by the decomposition built from a Takagi
factorization of ``W^T W`` (``rho = W W^dagger``). ``max_overlap_decomposition``
implements that route; it is independent of the search.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, numkernel
from .errors import NotQubit, ParamOutOfRange
from .monof import MonotoneF
from .pure import overlap, overlap_deficit
from .states import Ensemble, as_density, eigen_ensemble, projector

ESCALATE_GAP = 1e-6
POLISH_STEP = 0.02
MAX_SWEEPS = 200
GRID_SWEEPS = 2


@dataclass
class RoofOptions:
    m: int | None = None  # ensemble size, default rank**2
    n_starts: int = 32
    seed: int = 0
    max_iters: int = 2000  # per Nelder-Mead run
    tol: float = 1e-9
    max_restarts: int = 6
    escalate: bool = True


@dataclass
class RoofResult:
    value: float
    certificate: Ensemble
    n_starts: int
    best_start: int
    gap_estimate: float  # second-best start minus best start
    m: int
    converged: bool = True
    method: str = "roof"
    deficit: float | None = None  # 1 - value, for overlap searches


# ---------------------------------------------------------------- evaluation

def ensemble_overlaps(ens: Ensemble) -> tuple[np.ndarray, np.ndarray]:
    x = np.array([overlap(s) for s in ens.states])
    u = np.array([overlap_deficit(s) for s in ens.states])
    return x, u


def roof_objective(f: MonotoneF, ens: Ensemble) -> float:
    """sum_i p_i f(x_i) over an ensemble."""
    x, u = ensemble_overlaps(ens)
    return float(np.sum(ens.weights * np.atleast_1d(f.evaluate(x, u))))


def average_overlap(ens: Ensemble) -> tuple[float, float]:
    """``(sum_i p_i x_i, sum_i p_i (1 - x_i))``."""
    x, u = ensemble_overlaps(ens)
    return float(np.sum(ens.weights * x)), float(np.sum(ens.weights * u))


# ---------------------------------------------------------------- exact route

def _takagi_vectors(G: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Unitary ``Q`` and ``sigma >= 0`` with ``G = Q diag(sigma) Q^T`` for a
    complex symmetric ``G``, via the real symmetric embedding
    ``[[Re G, Im G], [Im G, -Re G]]``."""
    r = G.shape[0]
    A, B = G.real, G.imag
    K = np.block([[A, B], [B, -A]])
    spec = numkernel.eig_hermitian(0.5 * (K + K.T))
    w = spec.eigenvalues[::-1][:r]
    vecs = spec.eigenvectors[:, ::-1][:, :r].real
    Q = vecs[:r] + 1j * vecs[r:]
    sigma = np.maximum(w, 0.0)
    live = sigma > tol * max(1.0, sigma.max(initial=0.0))
    if not np.all(live):
        basis = [Q[:, k] / np.linalg.norm(Q[:, k]) for k in np.nonzero(live)[0]]
        for k in np.nonzero(~live)[0]:
            best, best_norm = None, 0.0
            for t in range(r):
                e = np.zeros(r, dtype=np.complex128)
                e[t] = 1.0
                for _ in range(2):
                    for v in basis:
                        e = e - v * np.vdot(v, e)
                nrm = np.linalg.norm(e)
                if nrm > best_norm:
                    best, best_norm = e, nrm
            v = best / best_norm
            basis.append(v)
            Q[:, k] = v
            sigma[k] = 0.0
    return Q, sigma


def max_overlap_decomposition(rho) -> RoofResult:
    """The decomposition with the largest average conjugate overlap, in
    closed form. ``value`` equals the root fidelity ``F(rho, rho*)``."""
    rho = as_density(rho)
    lam, V = eigen_ensemble(rho)
    W = V * np.sqrt(lam)
    Q, sigma = _takagi_vectors(W.T @ W)
    ens = Ensemble.from_unnormalized(Q.conj().T @ W.T)
    value = float(min(1.0, np.sum(sigma)))
    _, deficit = average_overlap(ens)
    return RoofResult(value, ens, 1, 0, 0.0, lam.size, True, "exact", deficit)


# ---------------------------------------------------------------- search

def _start_params(s: int, m: int, r: int, seed: int, takagi_M: np.ndarray | None) -> np.ndarray:
    if s == 0:
        A = np.zeros((m, r), dtype=np.complex128)
        A[:r, :r] = np.eye(r)
    elif s == 1 and takagi_M is not None:
        A = np.zeros((m, r), dtype=np.complex128)
        A[:r] = takagi_M
    else:
        rng = np.random.default_rng([seed, s])
        A = rng.normal(size=(m, r)) + 1j * rng.normal(size=(m, r))
    return _params_of(A)


def _params_of(M: np.ndarray) -> np.ndarray:
    return np.stack([M.real, M.imag], axis=-1).ravel().copy()


def _sweep_start(x0, m, r, W, mode, code, kp, opts):
    M = _kernels.orthonormal_columns(x0, m, r)
    P = np.ascontiguousarray(M @ W.T)
    value, _ = _kernels.pair_sweeps(P, mode, code, kp, opts.tol, MAX_SWEEPS, GRID_SWEEPS)
    return P, value


def _run_starts(W, m, mode, f, opts, takagi_M):
    """Pair sweeps from every start; the winner is then polished by
    Nelder-Mead over the full isometry."""
    r = W.shape[1]
    code, kp = (f.kernel_args() if f is not None else (0, np.zeros(1)))
    vals, branches = [], []
    for s in range(opts.n_starts):
        x0 = _start_params(s, m, r, opts.seed, takagi_M)
        P, v = _sweep_start(x0, m, r, W, mode, code, kp, opts)
        vals.append(v)
        branches.append(P)
        if v <= 1e-15:
            # the objective is nonnegative: a zero is globally optimal
            break
    vals = np.array(vals)
    best = int(np.argmin(vals))
    srt = np.sort(vals)
    gap = float(srt[1] - srt[0]) if srt.size > 1 else 0.0
    x1 = _params_of(branches[best] @ np.linalg.pinv(W).T)
    x, fx, conv = _kernels.local_search(
        x1, POLISH_STEP, opts.max_iters, opts.tol, opts.max_restarts, m, r, W, mode, code, kp
    )
    if fx > vals[best]:
        x = _params_of(_kernels.orthonormal_columns(x1, m, r))
    return best, min(fx, vals[best]), x, gap, bool(conv), len(vals)


def _search(rho, mode: int, f: MonotoneF | None, opts: RoofOptions):
    rho = as_density(rho)
    lam, V = eigen_ensemble(rho)
    r = lam.size
    W = np.ascontiguousarray(V * np.sqrt(lam))
    if r == 1:
        ens = Ensemble(np.ones(1), V[:, :1].T)
        return ens, 0, 0.0, 1, True, 1
    if f is not None and not f.compiled:
        raise ParamOutOfRange(f"f '{f.name}' has no compiled form; use a built-in or tabulated f")
    m = opts.m if opts.m is not None else r * r
    if m < r:
        raise ParamOutOfRange(f"ensemble size m = {m} below rank {r}")
    Q, _ = _takagi_vectors(W.T @ W)
    takagi_M = Q.conj().T
    best, fbest, xbest, gap, conv, used = _run_starts(W, m, mode, f, opts, takagi_M)
    if opts.escalate and opts.m is None and gap > ESCALATE_GAP and fbest > 1e-15:
        m2 = (r + 1) ** 2
        b2, f2, x2, g2, c2, u2 = _run_starts(W, m2, mode, f, opts, takagi_M)
        if f2 < fbest:
            best, fbest, xbest, gap, conv, used, m = b2, f2, x2, g2, c2, u2, m2
    M = _kernels.orthonormal_columns(xbest, m, r)
    ens = Ensemble.from_unnormalized(M @ W.T)
    return ens, best, gap, m, conv, used


def convex_roof(f: MonotoneF, rho, opts: RoofOptions | None = None) -> RoofResult:
    """min over decompositions of sum_i p_i f(|<psi_i*|psi_i>|).

    The search always includes the eigen-ensemble and the maximal-overlap
    decomposition among its starts, so the result never exceeds the value
    of either.
    """
    opts = opts or RoofOptions()
    ens, best, gap, m, conv, used = _search(rho, _kernels.MODE_ROOF, f, opts)
    return RoofResult(roof_objective(f, ens), ens, used, best, gap, m, conv, "roof")


def concave_roof_overlap(rho, opts: RoofOptions | None = None) -> RoofResult:
    """max over decompositions of sum_i p_i |<psi_i*|psi_i>| by search."""
    opts = opts or RoofOptions()
    ens, best, gap, m, conv, used = _search(rho, _kernels.MODE_DEFICIT, None, opts)
    value, deficit = average_overlap(ens)
    return RoofResult(value, ens, used, best, gap, m, conv, "overlap", deficit)


def tilde_measure(f: MonotoneF, rho, opts: RoofOptions | None = None, method: str = "search") -> RoofResult:
    """f at the maximal average overlap.

    ``method="search"`` uses the multi-start search; ``method="exact"`` the
    closed-form maximal-overlap decomposition.
    """
    if method == "search":
        res = concave_roof_overlap(rho, opts)
    elif method == "exact":
        res = max_overlap_decomposition(rho)
    else:
        raise ValueError(f"unknown method {method!r}")
    value = float(f.evaluate(res.value, res.deficit))
    return RoofResult(value, res.certificate, res.n_starts, res.best_start, res.gap_estimate,
                      res.m, res.converged, "tilde" if method == "search" else "tilde-exact", res.deficit)


# ---------------------------------------------------------------- closed forms

@dataclass
class QubitClosedForm:
    tilde: float
    optimal_ensemble: Ensemble
    lam: float
    z: float


def qubit_closed_forms(f: MonotoneF, rho) -> QubitClosedForm:
    """Optimal two-branch decomposition of a qubit state and the resulting
    ``f(sqrt(1 - 4 (Im rho_12)^2))``.

    Branches are ``e^{i theta} sqrt((1 +- z)/2)|1> + sqrt((1 -+ z)/2)|2>`` with
    ``rho_12 = e^{i theta}|rho_12|`` and ``z = sqrt(1 - 4|rho_12|^2)``; the
    weight follows from the (1, 1) entry.
    """
    rho = as_density(rho)
    if rho.shape != (2, 2):
        raise NotQubit(f"shape {rho.shape}")
    b = rho[0, 1]
    mod = min(0.5, abs(b))
    theta = np.angle(b) if mod > 0 else 0.0
    z = float(np.sqrt(max(0.0, 1.0 - 4.0 * mod * mod)))
    ph = np.exp(1j * theta)
    plus = np.array([ph * np.sqrt((1 + z) / 2), np.sqrt((1 - z) / 2)])
    minus = np.array([ph * np.sqrt((1 - z) / 2), np.sqrt((1 + z) / 2)])
    if z > 1e-12:
        lam = (2.0 * rho[0, 0].real - 1.0 + z) / (2.0 * z)
    else:
        lam = 0.5
    lam = float(min(1.0, max(0.0, lam)))
    ens = Ensemble(np.array([lam, 1.0 - lam]), np.array([plus, minus]))
    im = b.imag
    x = float(np.sqrt(max(0.0, 1.0 - 4.0 * im * im)))
    u = 4.0 * im * im / (1.0 + x)
    return QubitClosedForm(float(f.evaluate(x, u)), ens, lam, z)


def qutrit_family(lam: float, z: float) -> np.ndarray:
    """Qutrit ``lam |phi><phi| + (1 - lam)|3><3|`` with
    ``|phi> = sqrt((1+z)/2)|1> - i sqrt((1-z)/2)|2>``; ``overlap(phi) = z``."""
    if not 0.0 <= lam <= 1.0:
        raise ParamOutOfRange(f"lambda = {lam} not in [0, 1]")
    if not 0.0 <= z <= 1.0:
        raise ParamOutOfRange(f"z = {z} not in [0, 1]")
    phi = np.array([np.sqrt((1 + z) / 2), -1j * np.sqrt((1 - z) / 2), 0.0])
    three = np.array([0.0, 0.0, 1.0], dtype=np.complex128)
    return lam * projector(phi) + (1.0 - lam) * projector(three)


def qutrit_family_formulas(f: MonotoneF, lam: float, z: float) -> tuple[float, float]:
    """Analytic ``(tilde, roof)`` on the qutrit family:
    ``f(lam z + 1 - lam)`` and ``lam f(z)``."""
    tilde = float(f.evaluate(lam * z + 1.0 - lam, lam * (1.0 - z)))
    roof = lam * float(f.evaluate(z, 1.0 - z))
    return tilde, roof


@dataclass
class ProbeRow:
    state_index: int
    tilde: float
    roof: float
    excess: float


def convexity_probe(f: MonotoneF, states, opts: RoofOptions | None = None) -> list[ProbeRow]:
    """``tilde - roof`` per state; a clearly positive excess shows the tilde
    quantifier is not convex for this f."""
    rows = []
    for i, rho in enumerate(states):
        t = tilde_measure(f, rho, opts).value
        c = convex_roof(f, rho, opts).value
        rows.append(ProbeRow(i, t, c, t - c))
    return rows
