"""Pure-state imaginarity through the conjugate overlap |<psi*|psi>|."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import NegativeRadicand, ParamOutOfRange
from .states import check_pure

PIVOT_TOL = 1e-10


def overlap(psi) -> float:
    """|sum_m psi_m^2|: 1 for real states (up to phase), 0 for maximally
    imaginary ones."""
    psi = np.asarray(psi, dtype=np.complex128)
    return float(min(1.0, abs(np.sum(psi * psi))))


def overlap_deficit(psi) -> float:
    """``1 - overlap(psi)`` without cancellation.

    Uses ``1 - x^2 = 4 sum_{m<n} (a_m b_n - a_n b_m)^2`` for ``psi = a + i b``.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    a, b = psi.real, psi.imag
    cross = np.outer(a, b) - np.outer(b, a)
    one_minus_sq = 2.0 * float(np.sum(cross * cross))
    return min(1.0, one_minus_sq / (1.0 + overlap(psi)))


def pure_measure(f, psi) -> float:
    """f(|<psi*|psi>|)."""
    psi = check_pure(psi)
    return float(f.evaluate(overlap(psi), overlap_deficit(psi)))


def overlap_via_im_parts(psi) -> float:
    """The overlap recomputed from the imaginary parts of |psi><psi|:
    sqrt(1 - 2 sum_{m != n} (Im rho_mn)^2)."""
    psi = np.asarray(psi, dtype=np.complex128)
    im = np.imag(np.outer(psi, psi.conj()))
    radicand = 1.0 - 2.0 * float(np.sum(im * im))
    if radicand < -1e-10:
        raise NegativeRadicand(f"radicand {radicand:.3g}")
    return float(np.sqrt(max(0.0, radicand)))


@dataclass(frozen=True)
class CanonicalForm:
    """Real orthogonal ``O`` and phase ``alpha`` with
    ``O e^{i alpha} psi = sqrt((1+x)/2)|1> + i sqrt((1-x)/2)|2>``."""

    O: np.ndarray
    x: float
    phase: float

    def image(self) -> np.ndarray:
        return canonical_state(self.x, self.O.shape[0])


def canonical_state(x: float, dim: int = 2, deficit: float | None = None) -> np.ndarray:
    """sqrt((1+x)/2)|1> + i sqrt((1-x)/2)|2>, padded with zeros to ``dim``."""
    if dim < 2:
        raise ParamOutOfRange("canonical states need dim >= 2")
    u = 1.0 - x if deficit is None else deficit
    out = np.zeros(dim, dtype=np.complex128)
    out[0] = np.sqrt(max(0.0, 1.0 - 0.5 * u))
    out[1] = 1j * np.sqrt(max(0.0, 0.5 * u))
    return out


def _complete_rows(rows: list[np.ndarray], d: int) -> np.ndarray:
    """Extend orthonormal real rows to an orthonormal basis of R^d by
    Gram-Schmidt over standard basis vectors, largest residual first."""
    basis = list(rows)
    while len(basis) < d:
        B = np.array(basis)
        best, best_norm = None, PIVOT_TOL
        for k in range(d):
            e = np.zeros(d)
            e[k] = 1.0
            for _ in range(2):
                e = e - B.T @ (B @ e)
            nrm = np.linalg.norm(e)
            if nrm > best_norm:
                best, best_norm = e, nrm
        basis.append(best / best_norm)
    return np.array(basis)


def canonical_form(psi) -> CanonicalForm:
    """Constructive real orthogonal normal form of a pure state (d >= 2)."""
    psi = check_pure(psi)
    d = psi.size
    if d < 2:
        raise ParamOutOfRange("canonical form needs dim >= 2")
    w = np.sum(psi * psi)
    alpha = -cmath.phase(w) / 2.0 if abs(w) > 0.0 else 0.0
    phi = np.exp(1j * alpha) * psi
    a, b = phi.real.copy(), phi.imag.copy()
    na = np.linalg.norm(a)
    e1 = a / na
    b = b - e1 * (e1 @ b)
    nb = np.linalg.norm(b)
    rows = [e1]
    if nb > PIVOT_TOL:
        rows.append(b / nb)
    O = _complete_rows(rows, d)
    return CanonicalForm(O, overlap(psi), float(alpha))
