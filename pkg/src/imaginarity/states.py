"""Pure states, density matrices and pure-state ensembles in the fixed
reference basis.

States are plain numpy arrays: a 1-D complex vector is a pure state, a 2-D
complex matrix is a density matrix. The ``check_*`` helpers enforce the
invariants and name the first one that fails.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import numkernel
from .errors import DimensionMismatch, InvalidState, NotIsometry, ParamOutOfRange, RankMismatch

RANK_TOL = 1e-10
EQUAL_TOL = 1e-8
WEIGHT_DROP = 1e-14


# ---------------------------------------------------------------- validation

def pure_violations(psi, tol: float = EQUAL_TOL) -> list[tuple[str, float, bool]]:
    """All pure-state invariants as ``(name, residual, ok)`` triples."""
    psi = np.asarray(psi)
    out = []
    shape_ok = psi.ndim == 1 and psi.size >= 1
    out.append(("shape", 0.0 if shape_ok else 1.0, shape_ok))
    if not shape_ok:
        return out
    finite = bool(np.all(np.isfinite(psi)))
    out.append(("finite", 0.0 if finite else float("inf"), finite))
    if not finite:
        return out
    res = abs(float(np.vdot(psi, psi).real) - 1.0)
    out.append(("norm", res, res <= tol))
    return out


def density_violations(rho, tol: float = EQUAL_TOL) -> list[tuple[str, float, bool]]:
    """All density-matrix invariants as ``(name, residual, ok)`` triples."""
    rho = np.asarray(rho)
    out = []
    shape_ok = rho.ndim == 2 and rho.shape[0] == rho.shape[1] and rho.shape[0] >= 1
    out.append(("shape", 0.0 if shape_ok else 1.0, shape_ok))
    if not shape_ok:
        return out
    finite = bool(np.all(np.isfinite(rho)))
    out.append(("finite", 0.0 if finite else float("inf"), finite))
    if not finite:
        return out
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    out.append(("hermitian", herm, herm <= tol))
    tr = abs(complex(np.trace(rho)) - 1.0)
    out.append(("trace", tr, tr <= tol))
    if herm <= numkernel.HERMITIAN_TOL:
        wmin = float(numkernel.eig_hermitian(rho).eigenvalues[0])
    else:
        wmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    neg = max(0.0, -wmin)
    out.append(("psd", neg, neg <= max(tol, 1e-9)))
    return out


def _first_violation(report):
    for name, res, ok in report:
        if not ok:
            raise InvalidState(name, res)


def check_pure(psi, tol: float = EQUAL_TOL) -> np.ndarray:
    _first_violation(pure_violations(psi, tol))
    return np.asarray(psi, dtype=np.complex128)


def check_density(rho, tol: float = EQUAL_TOL) -> np.ndarray:
    _first_violation(density_violations(rho, tol))
    rho = np.asarray(rho, dtype=np.complex128)
    return 0.5 * (rho + rho.conj().T)


def as_density(state, tol: float = EQUAL_TOL) -> np.ndarray:
    """Accept a pure vector or a density matrix; return a validated matrix."""
    state = np.asarray(state)
    if state.ndim == 1:
        psi = check_pure(state, tol)
        return np.outer(psi, psi.conj())
    return check_density(state, tol)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


# ---------------------------------------------------------------- basic ops

def conjugate(state) -> np.ndarray:
    """Entrywise complex conjugate in the reference basis (pure or mixed)."""
    return np.conj(np.asarray(state, dtype=np.complex128))


def real_imag_parts(rho) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(Re rho, Im rho)``: a real symmetric and a real antisymmetric
    matrix with ``rho = Re + i Im``."""
    rho = np.asarray(rho, dtype=np.complex128)
    return rho.real.copy(), rho.imag.copy()


def is_real_state(rho, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(np.asarray(rho).imag), initial=0.0) <= tol)


def direct_sum(p: float, rho1, rho2) -> np.ndarray:
    """Block-diagonal state ``p rho1 (+) (1-p) rho2``."""
    if not 0.0 <= p <= 1.0:
        raise ParamOutOfRange(f"p = {p} not in [0, 1]")
    rho1 = as_density(rho1)
    rho2 = as_density(rho2)
    d1, d2 = rho1.shape[0], rho2.shape[0]
    out = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
    out[:d1, :d1] = p * rho1
    out[d1:, d1:] = (1.0 - p) * rho2
    return out


def rank(rho, tol: float = RANK_TOL) -> int:
    return int(np.sum(numkernel.eig_hermitian(rho).eigenvalues > tol))


# ---------------------------------------------------------------- sampling

def sample_pure(dim: int, seed) -> np.ndarray:
    """Haar-random pure state, deterministic per seed."""
    rng = np.random.default_rng(seed)
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return z / np.linalg.norm(z)


def sample_density(dim: int, rank: int, seed) -> np.ndarray:
    """Random state of the given rank: partial trace of a Haar-random pure
    state on ``dim x rank``."""
    if not 1 <= rank <= dim:
        raise ParamOutOfRange(f"rank {rank} not in [1, {dim}]")
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = G @ G.conj().T
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


# ---------------------------------------------------------------- ensembles

@dataclass(frozen=True)
class Ensemble:
    """Pure-state decomposition ``sum_i p_i |psi_i><psi_i|``.

    ``states`` holds one normalized state per row.
    """

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        s = np.atleast_2d(np.asarray(self.states, dtype=np.complex128))
        if w.ndim != 1 or s.shape[0] != w.size:
            raise DimensionMismatch("weights and states disagree in length")
        if np.any(w < -1e-15):
            raise ParamOutOfRange("negative ensemble weight")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", s)

    def __len__(self):
        return self.weights.size

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def density(self) -> np.ndarray:
        S = self.states
        return (S.T * self.weights) @ S.conj()

    @classmethod
    def from_unnormalized(cls, vectors, drop: float = WEIGHT_DROP) -> "Ensemble":
        """Build from unnormalized branch vectors (rows); weights are squared
        norms and branches lighter than ``drop`` are discarded."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
        p = np.sum(np.abs(vectors) ** 2, axis=1)
        keep = p >= drop
        if not np.any(keep):
            keep = p == p.max()
        p = p[keep]
        states = vectors[keep] / np.sqrt(p)[:, None]
        return cls(p, states)


def eigen_ensemble(rho, tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues above ``tol`` and their eigenvectors (columns)."""
    spec = numkernel.eig_hermitian(rho)
    keep = spec.eigenvalues > tol
    return spec.eigenvalues[keep], spec.eigenvectors[:, keep]


def hjw_decompositions(rho, M) -> Ensemble:
    """Pure-state decomposition of ``rho`` generated by an ``m x r`` mixing
    matrix with orthonormal columns.

    Branch ``i`` is ``sum_j M[i, j] sqrt(lambda_j) |v_j>`` over the eigen-ensemble
    of ``rho``; every decomposition with ``m`` members arises this way.
    """
    rho = as_density(rho)
    M = np.atleast_2d(np.asarray(M, dtype=np.complex128))
    lam, V = eigen_ensemble(rho)
    r = lam.size
    if M.shape[1] != r:
        raise RankMismatch(f"mixing matrix has {M.shape[1]} columns, rank(rho) = {r}")
    if M.shape[0] < r:
        raise NotIsometry(f"need at least {r} rows, got {M.shape[0]}")
    err = np.max(np.abs(M.conj().T @ M - np.eye(r)))
    if err > 1e-8:
        raise NotIsometry(f"max |M^dagger M - I| = {err:.3g}")
    W = V * np.sqrt(lam)
    return Ensemble.from_unnormalized(M @ W.T)


# ---------------------------------------------------------------- JSON I/O

def _pairs(z) -> list:
    if np.ndim(z) == 0:
        return [float(np.real(z)), float(np.imag(z))]
    return [_pairs(v) for v in z]


def state_to_json(state) -> dict:
    state = np.asarray(state, dtype=np.complex128)
    kind = "pure" if state.ndim == 1 else "density"
    return {"dim": int(state.shape[0]), "kind": kind, "data": _pairs(state)}


def _parse_complex(data, shape) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != tuple(shape) + (2,):
        raise InvalidState("shape", message=f"expected {tuple(shape)} [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_from_json(obj, tol: float = EQUAL_TOL, validate: bool = True) -> np.ndarray:
    """Parse the state JSON object; raises ``InvalidState`` naming the first
    violated invariant."""
    if not isinstance(obj, dict) or not {"dim", "kind", "data"} <= set(obj):
        raise InvalidState("schema", message="state JSON needs 'dim', 'kind' and 'data'")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise InvalidState("dim", message=f"'dim' must be a positive integer, got {dim!r}")
    kind = obj["kind"]
    if kind == "pure":
        state = _parse_complex(obj["data"], (dim,))
        if validate:
            state = check_pure(state, tol)
    elif kind == "density":
        state = _parse_complex(obj["data"], (dim, dim))
        if validate:
            state = check_density(state, tol)
    else:
        raise InvalidState("kind", message=f"unknown kind {kind!r}")
    return state


def load_state(path, tol: float = EQUAL_TOL) -> np.ndarray:
    with open(path) as fh:
        return state_from_json(json.load(fh), tol)


def save_state(path, state) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_json(state), fh)
        fh.write("\n")
