"""Admissible functions f: [0, 1] -> [0, 1] (f(1) = 0, decreasing, concave)
that turn the conjugate overlap of a pure state into its imaginarity.

Built-ins are addressed by the names used on the command line::

    geometric       (1 - x) / 2
    robustness_row  sqrt(1 - x^2) / 2
    entropy         binary entropy of (1 + x) / 2, in bits
    fidelity_row    1 - x
    tsallis:<mu>    1 - x^2              (mu in (0, 1) only labels the row)
    l2              sqrt((1 - x^2) / 2)
    fk:<k>          min((1 - x) / k, 1)  (k in (0, 1])
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import ParamOutOfRange, UnknownName

TABLE_ONE = ("geometric", "robustness_row", "entropy", "fidelity_row", "tsallis")

_CODES = {
    "geometric": _kernels.GEOMETRIC,
    "robustness_row": _kernels.ROBUSTNESS_ROW,
    "entropy": _kernels.ENTROPY,
    "fidelity_row": _kernels.FIDELITY_ROW,
    "tsallis": _kernels.TSALLIS,
    "l2": _kernels.L2,
    "fk": _kernels.FK,
}
_DEFAULT_PARAMS = {"tsallis": (0.5,), "fk": (1.0,)}


@dataclass(frozen=True)
class MonotoneF:
    """A named function of the conjugate overlap.

    Built-in and tabulated functions carry a kernel ``code`` and parameter
    vector so the roof searches can evaluate them in compiled code; a
    ``python_fn`` alone is enough for admissibility checks and pure-state
    evaluation.
    """

    name: str
    params: tuple = ()
    code: int = -1
    kernel_params: np.ndarray = field(default=None, compare=False, repr=False)
    python_fn: Callable | None = field(default=None, compare=False, repr=False)

    @property
    def label(self) -> str:
        if self.name in ("tsallis", "fk"):
            return f"{self.name}:{self.params[0]:g}"
        return self.name

    @property
    def compiled(self) -> bool:
        return self.code >= 0

    def kernel_args(self):
        kp = self.kernel_params
        if kp is None:
            kp = np.zeros(1)
        return self.code, kp

    def evaluate(self, x, deficit=None):
        """f(x); pass ``deficit = 1 - x`` when it is known more accurately."""
        x = np.asarray(x, dtype=float)
        if deficit is None:
            deficit = 1.0 - x
        u = np.broadcast_to(np.asarray(deficit, dtype=float), x.shape)
        if self.compiled:
            code, kp = self.kernel_args()
            out = _kernels.f_vector(code, kp, np.ravel(x).copy(), np.ravel(u).copy()).reshape(x.shape)
        else:
            out = np.asarray(self.python_fn(x), dtype=float)
        return float(out) if out.ndim == 0 else out

    __call__ = evaluate

    def is_affine(self) -> bool:
        return self.code in (_kernels.GEOMETRIC, _kernels.FIDELITY_ROW)


def builtin(name: str, *params: float) -> MonotoneF:
    if name not in _CODES:
        raise UnknownName(name)
    if not params:
        params = _DEFAULT_PARAMS.get(name, ())
    params = tuple(float(p) for p in params)
    if name == "tsallis":
        if len(params) != 1 or not 0.0 < params[0] < 1.0:
            raise ParamOutOfRange(f"tsallis needs mu in (0, 1), got {params}")
    elif name == "fk":
        if len(params) != 1 or not 0.0 < params[0] <= 1.0:
            raise ParamOutOfRange(f"fk needs k in (0, 1], got {params}")
    elif params:
        raise ParamOutOfRange(f"{name} takes no parameters")
    kp = np.array(params if params else (0.0,), dtype=float)
    return MonotoneF(name, params, _CODES[name], kp)


def tabulated(xs, ys, name: str = "tabulated") -> MonotoneF:
    """Piecewise-linear f through the samples ``(xs[i], ys[i])``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise ParamOutOfRange("tabulated f needs matching 1-D grids with >= 2 points")
    if np.any(np.diff(xs) <= 0) or xs[0] > 0.0 or xs[-1] < 1.0:
        raise ParamOutOfRange("grid must be increasing and cover [0, 1]")
    kp = np.concatenate([[xs.size], xs, ys])
    return MonotoneF(name, (), _kernels.TABULATED, kp)


def from_callable(fn: Callable, name: str = "custom") -> MonotoneF:
    return MonotoneF(name, (), -1, None, fn)


def parse(spec: str) -> MonotoneF:
    """Parse ``name`` or ``name:param`` (e.g. ``tsallis:0.5``, ``fk:0.4``)."""
    name, _, arg = spec.strip().partition(":")
    if arg:
        try:
            value = float(arg)
        except ValueError:
            raise ParamOutOfRange(f"bad parameter in {spec!r}") from None
        return builtin(name, value)
    return builtin(name)


def registry(mu: float = 0.5, k: float = 0.5) -> list[MonotoneF]:
    """All seven built-ins."""
    return [
        builtin("geometric"),
        builtin("robustness_row"),
        builtin("entropy"),
        builtin("fidelity_row"),
        builtin("tsallis", mu),
        builtin("l2"),
        builtin("fk", k),
    ]


def table_one(mu: float = 0.5) -> list[MonotoneF]:
    return [builtin(n, mu) if n == "tsallis" else builtin(n) for n in TABLE_ONE]


@dataclass
class AdmissibilityReport:
    ok: bool
    first_violation: str | None = None
    condition: str | None = None


def check_admissible(f, grid_step: float = 1e-3, concavity_step: float = 1e-2) -> AdmissibilityReport:
    """Sample-based check of f(1) = 0, monotone decrease and midpoint
    concavity. Reports the first violating point or pair."""
    if not 0.0 < grid_step <= 0.1:
        raise ParamOutOfRange("grid_step must lie in (0, 0.1]")
    fn = f if callable(f) else f.evaluate
    f1 = float(fn(np.array(1.0)))
    if abs(f1) > 1e-9:
        return AdmissibilityReport(False, f"f(1) = {f1:.6g}", "(i) f(1) = 0")

    n = int(round(1.0 / grid_step))
    xs = np.linspace(0.0, 1.0, n + 1)
    ys = np.asarray(fn(xs), dtype=float)
    inc = np.nonzero(np.diff(ys) > 1e-12)[0]
    if inc.size:
        i = inc[0]
        return AdmissibilityReport(
            False, f"f({xs[i]:.6g}) = {ys[i]:.6g} < f({xs[i + 1]:.6g}) = {ys[i + 1]:.6g}", "(ii) decreasing"
        )

    nc = int(round(1.0 / max(concavity_step, grid_step)))
    xc = np.linspace(0.0, 1.0, nc + 1)
    yc = np.asarray(fn(xc), dtype=float)
    mid = np.asarray(fn(0.5 * (xc[:, None] + xc[None, :])), dtype=float)
    gap = 0.5 * (yc[:, None] + yc[None, :]) - mid
    bad = np.argwhere(gap > 1e-9)
    if bad.size:
        i, j = bad[0]
        return AdmissibilityReport(
            False, f"midpoint of x = {xc[i]:.6g}, y = {xc[j]:.6g} falls short by {gap[i, j]:.3g}", "(iii) concave"
        )
    return AdmissibilityReport(True)
