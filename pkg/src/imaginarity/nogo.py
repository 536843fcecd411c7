"""A pair of four-dimensional states on which a finite set of convex-roof
measures all allow a conversion that one further measure forbids.

    rho   = p1 |psi1><psi1| (+) p2 |psi2><psi2|,  psi1 = (|1> + i|2>)/sqrt2,
                                                  psi2 = sqrt(lam)|3> + i sqrt(1-lam)|4>
    sigma = |phi><phi|,                           phi  = sqrt(eta)|1> + i sqrt(1-eta)|2>

With ``f_k(x) = min((1 - x)/k, 1)`` and ``k = 2 eta`` the extra measure gives
``sigma`` the value 1 and ``rho`` the value ``p1 + p2 min(lam/eta, 1)``, so it
forbids ``rho -> sigma`` exactly when ``lam < eta``. Any fixed measure list is
satisfied once ``p1`` is large enough, because ``psi1`` is maximally imaginary.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NoWitnessFound, ParamOutOfRange, WrongForm
from .monof import MonotoneF, builtin, table_one
from .roof import RoofOptions, convex_roof
from .states import projector

INEQ_TOL = 1e-9
VERIFY_TOL = 1e-5


def _psi1() -> np.ndarray:
    return np.array([1.0, 1j, 0.0, 0.0]) / np.sqrt(2.0)


def _psi2(lam: float) -> np.ndarray:
    return np.array([0.0, 0.0, np.sqrt(lam), 1j * np.sqrt(1.0 - lam)])


def _phi(eta: float) -> np.ndarray:
    return np.array([np.sqrt(eta), 1j * np.sqrt(1.0 - eta), 0.0, 0.0])


def build_states(p1: float, lam: float, eta: float) -> tuple[np.ndarray, np.ndarray]:
    if not 0.0 < p1 < 1.0:
        raise ParamOutOfRange(f"p1 = {p1} not in (0, 1)")
    if not 0.0 <= lam < 0.5:
        raise ParamOutOfRange(f"lambda = {lam} not in [0, 1/2)")
    if not 0.0 <= eta < 0.5:
        raise ParamOutOfRange(f"eta = {eta} not in [0, 1/2)")
    rho = p1 * projector(_psi1()) + (1.0 - p1) * projector(_psi2(lam))
    return rho, projector(_phi(eta))


def fk(k: float) -> MonotoneF:
    return builtin("fk", k)


def fk_measure_direct(rho, k: float) -> float:
    """p1 f_k(0) + p2 f_k(1 - 2 lam), read off a state of the block form."""
    if not 0.0 < k <= 1.0:
        raise ParamOutOfRange(f"k = {k} not in (0, 1]")
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise WrongForm(f"expected a 4x4 state, got {rho.shape}")
    p1 = float(np.trace(rho[:2, :2]).real)
    p2 = 1.0 - p1
    lam = float(rho[2, 2].real / p2) if p2 > 1e-14 else 0.0
    if not 0.0 < p1 < 1.0 or not 0.0 <= lam < 0.5:
        raise WrongForm(f"parameters out of range: p1 = {p1:.6g}, lambda = {lam:.6g}")
    ref = p1 * projector(_psi1()) + p2 * projector(_psi2(lam))
    err = float(np.max(np.abs(rho - ref)))
    if err > 1e-8:
        raise WrongForm(f"state deviates from the block form by {err:.3g}")
    f = fk(k)
    return p1 * float(f(0.0)) + p2 * float(f(1.0 - 2.0 * lam, 2.0 * lam))


def _steps(n: int, h: float = 0.05) -> tuple:
    return tuple(round(i * h, 10) for i in range(1, n))


@dataclass
class NogoGrid:
    """Lexicographic search grid; defaults are 0.05 steps inside (0, 1) for
    p1 and inside (0, 1/2) for lam and eta."""

    p1: tuple = _steps(20)
    lam: tuple = _steps(10)
    eta: tuple = _steps(10)

    def size(self) -> int:
        return len(self.p1) * len(self.lam) * len(self.eta)


@dataclass
class NogoWitness:
    p1: float
    lam: float
    eta: float
    k: float
    measure_values_rho: dict = field(default_factory=dict)
    measure_values_sigma: dict = field(default_factory=dict)
    fk_rho: float = 0.0
    fk_sigma: float = 0.0
    fk_rho_direct: float = 0.0
    seed: int = 0
    n_starts: int = 0
    grid_points_checked: int = 0

    def holds(self, tol: float = INEQ_TOL) -> bool:
        ok = all(self.measure_values_rho[n] >= self.measure_values_sigma[n] - tol for n in self.measure_values_rho)
        return ok and self.fk_rho < self.fk_sigma - tol

    def to_json(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return out


def witness_to_text(w: NogoWitness) -> str:
    return json.dumps(w.to_json(), sort_keys=True, indent=2) + "\n"


def _roof(f, rho, opts):
    return convex_roof(f, rho, opts).value


def find_witness(measures: list[MonotoneF] | None = None, grid: NogoGrid | None = None,
                 opts: RoofOptions | None = None) -> NogoWitness:
    """First grid point, in lexicographic (p1, lam, eta) order, where every
    listed measure allows rho -> sigma and f_k with k = 2 eta forbids it.

    Measure values come from the roof optimizer; values of rho are cached per
    (p1, lam) and values of sigma per eta.
    """
    measures = table_one() if measures is None else list(measures)
    grid = grid or NogoGrid()
    opts = opts or RoofOptions()
    sigma_cache: dict = {}
    checked = 0
    for p1 in grid.p1:
        for lam in grid.lam:
            rho_vals = None
            for eta in grid.eta:
                checked += 1
                k = 2.0 * eta
                if not 0.0 < k <= 1.0:
                    continue
                rho, sigma = build_states(p1, lam, eta)
                # cheap screen on the closed form before any optimization
                if fk_measure_direct(rho, k) >= 1.0 - INEQ_TOL:
                    continue
                if rho_vals is None:
                    rho_vals = {f.label: _roof(f, rho, opts) for f in measures}
                if eta not in sigma_cache:
                    sigma_cache[eta] = {f.label: _roof(f, sigma, opts) for f in measures}
                sig_vals = sigma_cache[eta]
                if any(rho_vals[n] < sig_vals[n] - INEQ_TOL for n in rho_vals):
                    continue
                f = fk(k)
                w = NogoWitness(
                    float(p1), float(lam), float(eta), float(k), dict(rho_vals), dict(sig_vals),
                    _roof(f, rho, opts), _roof(f, sigma, opts), fk_measure_direct(rho, k),
                    opts.seed, opts.n_starts, checked,
                )
                if w.holds():
                    return w
    raise NoWitnessFound(f"no witness among {checked} grid points")


@dataclass
class Verification:
    ok: bool
    witness: NogoWitness
    max_drift: float  # largest change of any value against the original run


def verify_witness(w: NogoWitness, measures: list[MonotoneF] | None = None,
                   opts: RoofOptions | None = None) -> Verification:
    """Recompute every value with twice the starts and a fresh seed stream;
    the witness stands if the inequalities still hold and no value moved by
    more than 1e-5."""
    measures = table_one() if measures is None else list(measures)
    base = opts or RoofOptions()
    opts2 = RoofOptions(base.m, 2 * base.n_starts, base.seed + 1, base.max_iters, base.tol,
                        base.max_restarts, base.escalate)
    rho, sigma = build_states(w.p1, w.lam, w.eta)
    f = fk(w.k)
    w2 = NogoWitness(
        w.p1, w.lam, w.eta, w.k,
        {g.label: _roof(g, rho, opts2) for g in measures},
        {g.label: _roof(g, sigma, opts2) for g in measures},
        _roof(f, rho, opts2), _roof(f, sigma, opts2), fk_measure_direct(rho, w.k),
        opts2.seed, opts2.n_starts, w.grid_points_checked,
    )
    drift = [abs(w2.fk_rho - w.fk_rho), abs(w2.fk_sigma - w.fk_sigma), abs(w2.fk_rho - w2.fk_rho_direct)]
    for n in w.measure_values_rho:
        if n in w2.measure_values_rho:
            drift.append(abs(w2.measure_values_rho[n] - w.measure_values_rho[n]))
            drift.append(abs(w2.measure_values_sigma[n] - w.measure_values_sigma[n]))
    max_drift = float(max(drift))
    return Verification(w2.holds() and max_drift <= VERIFY_TOL, w2, max_drift)
