"""Real operations: channels whose Kraus operators have real entries in the
reference basis, plus the explicit constructions that realize conversions
between states."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDenominator, DimensionMismatch, InvalidChannel, NotQubit, ParamOutOfRange, UnsupportedPair
from .pure import canonical_form, canonical_state, overlap, overlap_deficit
from .states import Ensemble, as_density, check_pure

COMPLETENESS_TOL = 1e-9
REAL_TOL = 1e-12
BRANCH_DROP = 1e-12


@dataclass(frozen=True)
class RealKrausChannel:
    kraus: tuple

    @property
    def d_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus[0].shape[0]

    def completeness_residual(self) -> float:
        S = sum(K.T @ K for K in self.kraus)
        return float(np.max(np.abs(S - np.eye(self.d_in))))

    @classmethod
    def from_matrices(cls, mats, tol: float = COMPLETENESS_TOL) -> "RealKrausChannel":
        """Build from arrays, rejecting complex entries or incompleteness."""
        report = validate(mats, tol)
        if not report.ok:
            raise InvalidChannel("; ".join(report.violations))
        return cls(tuple(np.real(np.asarray(K)).astype(float) for K in mats))


@dataclass
class ChannelReport:
    ok: bool
    max_imag: float
    completeness: float
    violations: list = field(default_factory=list)


def validate(channel, tol: float = COMPLETENESS_TOL) -> ChannelReport:
    """Check realness of every entry and sum_j K_j^T K_j = I."""
    mats = channel.kraus if isinstance(channel, RealKrausChannel) else channel
    mats = [np.asarray(K) for K in mats]
    violations = []
    if not mats:
        return ChannelReport(False, 0.0, float("inf"), ["no Kraus operators"])
    shapes = {K.shape for K in mats}
    if len(shapes) != 1 or mats[0].ndim != 2:
        return ChannelReport(False, 0.0, float("inf"), [f"inconsistent Kraus shapes {sorted(shapes)}"])
    max_imag = max(float(np.max(np.abs(np.imag(K)), initial=0.0)) for K in mats)
    if max_imag > REAL_TOL:
        violations.append(f"realness: max |Im K| = {max_imag:.3g}")
    Kr = [np.real(K) for K in mats]
    d_in = Kr[0].shape[1]
    completeness = float(np.max(np.abs(sum(K.T @ K for K in Kr) - np.eye(d_in))))
    if completeness > tol:
        violations.append(f"completeness: max |sum K^T K - I| = {completeness:.3g}")
    return ChannelReport(not violations, max_imag, completeness, violations)


def _check_dims(channel: RealKrausChannel, rho):
    if rho.shape[0] != channel.d_in:
        raise DimensionMismatch(f"channel input dim {channel.d_in}, state dim {rho.shape[0]}")


def apply(channel: RealKrausChannel, rho) -> np.ndarray:
    rho = as_density(rho)
    _check_dims(channel, rho)
    out = sum(K @ rho @ K.T for K in channel.kraus)
    return 0.5 * (out + out.conj().T)


def branches(channel: RealKrausChannel, rho) -> list[tuple[float, np.ndarray]]:
    """Outcome probabilities and post-measurement states; outcomes with
    probability below 1e-12 are dropped."""
    rho = as_density(rho)
    _check_dims(channel, rho)
    out = []
    for K in channel.kraus:
        sigma = K @ rho @ K.T
        p = float(np.trace(sigma).real)
        if p >= BRANCH_DROP:
            sigma = sigma / p
            out.append((p, 0.5 * (sigma + sigma.conj().T)))
    return out


def identity_channel(d: int) -> RealKrausChannel:
    return RealKrausChannel((np.eye(d),))


def random_real_channel(d_in: int, d_out: int, n_kraus: int, seed) -> RealKrausChannel:
    """Blocks of a Haar-random isometry R^d_in -> R^(n_kraus d_out)."""
    if min(d_in, d_out, n_kraus) < 1:
        raise ParamOutOfRange("dimensions and Kraus count must be positive")
    N = n_kraus * d_out
    if N < d_in:
        raise ParamOutOfRange(f"n_kraus * d_out = {N} < d_in = {d_in}")
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.normal(size=(N, N)))
    Q = Q * np.sign(np.diag(R))
    V = Q[:, :d_in]
    return RealKrausChannel(tuple(V[j * d_out:(j + 1) * d_out].copy() for j in range(n_kraus)))


# ---------------------------------------------------------------- constructions

def _ratio(num: float, den: float) -> float:
    """sqrt(num / den) with 0/0 := 1."""
    if den <= 0.0:
        if num <= 0.0:
            return 1.0
        raise DegenerateDenominator(f"ratio {num:.3g} / 0")
    return float(np.sqrt(num / den))


@dataclass
class EnsembleChannel:
    eta: np.ndarray
    channel: RealKrausChannel
    phases: np.ndarray  # A_j eta = sqrt(p_j) e^{i phases[j]} psi_j


def ensemble_channel(ensemble: Ensemble) -> EnsembleChannel:
    """A real channel and a pure input ``eta`` whose outcomes are the
    ensemble's members: ``A_j eta = sqrt(p_j) e^{i a_j} psi_j``.

    ``eta`` is the canonical state whose overlap is the ensemble's average
    overlap ``x``. Each Kraus operator rescales the two canonical amplitudes
    of ``eta`` to those of ``psi_j`` and rotates into ``psi_j``'s frame.
    """
    d = ensemble.dim
    if d < 2:
        raise ParamOutOfRange("ensemble states need dim >= 2")
    p = ensemble.weights / np.sum(ensemble.weights)
    forms = [canonical_form(s / np.linalg.norm(s)) for s in ensemble.states]
    xs = np.array([overlap(s) for s in ensemble.states])
    us = np.array([overlap_deficit(s) for s in ensemble.states])
    x = float(np.sum(p * xs))
    u = float(np.sum(p * us))
    kraus = []
    for pj, form, uj in zip(p, forms, us):
        K = np.eye(d)
        K[0, 0] = _ratio(2.0 - uj, 2.0 - u)
        K[1, 1] = _ratio(uj, u)
        kraus.append(np.sqrt(pj) * (form.O.T @ K))
    eta = canonical_state(x, d, deficit=u)
    phases = np.array([f.phase for f in forms])
    return EnsembleChannel(eta, RealKrausChannel(tuple(kraus)), phases)


def pure_convertible(psi, phi) -> bool:
    """psi -> phi by a real operation iff phi is at least as real:
    overlap(phi) >= overlap(psi)."""
    return overlap(check_pure(phi)) >= overlap(check_pure(psi)) - 1e-10


def pure_conversion_channel(psi, phi) -> RealKrausChannel:
    """Explicit real channel taking |psi><psi| to |phi><phi|.

    In canonical frames the map sends ``can(x)`` to ``can(y)`` (``x <= y``)
    with two Kraus operators: a diagonal rescaling and an anti-diagonal one
    whose output is ``i can(y)``.
    """
    psi = check_pure(psi)
    phi = check_pure(phi)
    if not pure_convertible(psi, phi):
        raise UnsupportedPair("target is more imaginary than the source")
    dp, df = psi.size, phi.size
    if min(dp, df) < 2:
        raise ParamOutOfRange("states need dim >= 2")
    Op = canonical_form(psi).O
    Of = canonical_form(phi).O
    x, ux = overlap(psi), overlap_deficit(psi)
    y, uy = overlap(phi), overlap_deficit(phi)
    ratio = min(1.0, x / y) if y > 0.0 else 1.0
    t1 = np.sqrt(0.5 * (1.0 + ratio))
    t2 = np.sqrt(0.5 * (1.0 - ratio))
    cx, cy = np.sqrt(1.0 - 0.5 * ux), np.sqrt(1.0 - 0.5 * uy)
    sx, sy = np.sqrt(0.5 * ux), np.sqrt(0.5 * uy)

    K1 = np.zeros((df, dp))
    for k in range(2, min(dp, df)):
        K1[k, k] = 1.0
    K1[0, 0] = t1 * cy / cx
    K1[1, 1] = t1 * _ratio(uy, ux)
    K2 = np.zeros((df, dp))
    K2[0, 1] = t2 * cy / sx if sx > 0.0 else 0.0
    K2[1, 0] = -t2 * sy / cx
    kraus = [Of.T @ K1 @ Op, Of.T @ K2 @ Op]
    for k in range(df, dp):
        E = np.zeros((df, dp))
        E[0, k] = 1.0
        kraus.append(Of.T @ E @ Op)
    return RealKrausChannel(tuple(kraus))


@dataclass
class QubitConvertibility:
    ok: bool
    m1_rho: float
    m1_sigma: float
    m2_rho: float
    m2_sigma: float


def _qubit_ratio(rho) -> float:
    """(Im r12)^2 / (r11 r22 - (Re r12)^2), 0 on the degenerate edges."""
    prod = float(rho[0, 0].real * rho[1, 1].real)
    im2 = float(rho[0, 1].imag) ** 2
    den = prod - float(rho[0, 1].real) ** 2
    if prod <= 1e-14 or den <= 1e-14:
        return 0.0
    return min(1.0, im2 / den)


def qubit_convertible(rho, sigma, tol: float = 1e-10) -> QubitConvertibility:
    """Two-monotone test for qubit conversion under real operations."""
    rho = as_density(rho)
    sigma = as_density(sigma)
    if rho.shape != (2, 2) or sigma.shape != (2, 2):
        raise NotQubit("both states must be 2x2")
    m1r, m1s = abs(float(rho[0, 1].imag)), abs(float(sigma[0, 1].imag))
    m2r, m2s = _qubit_ratio(rho), _qubit_ratio(sigma)
    ok = m1r >= m1s - tol and m2r >= m2s - tol
    return QubitConvertibility(bool(ok), m1r, m1s, m2r, m2s)


# ---------------------------------------------------------------- JSON I/O

def channel_to_json(channel: RealKrausChannel) -> dict:
    return {"kraus": [K.tolist() for K in channel.kraus]}


def channel_from_json(obj, tol: float = COMPLETENESS_TOL) -> RealKrausChannel:
    if not isinstance(obj, dict) or "kraus" not in obj:
        raise InvalidChannel("channel JSON needs a 'kraus' list")
    try:
        mats = [np.asarray(K, dtype=float) for K in obj["kraus"]]
    except (TypeError, ValueError) as exc:
        raise InvalidChannel(f"Kraus entries must be real numbers: {exc}") from None
    return RealKrausChannel.from_matrices(mats, tol)


def load_channel(path, tol: float = COMPLETENESS_TOL) -> RealKrausChannel:
    with open(path) as fh:
        return channel_from_json(json.load(fh), tol)


def save_channel(path, channel: RealKrausChannel) -> None:
    with open(path, "w") as fh:
        json.dump(channel_to_json(channel), fh)
        fh.write("\n")
