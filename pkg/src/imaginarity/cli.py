"""Command-line front end.

    imaginarity measure STATE.json [--f SPEC ...]
    imaginarity fig1 {a,b} [--grid N]
    imaginarity convert SRC.json DST.json [--out CHANNEL.json]
    imaginarity nogo [--f SPEC ...] [--grid "p1=.. lam=.. eta=.."] [--verify]
    imaginarity validate FILE.json

Measure specs: ``roof:<f>`` (default when no prefix), ``tilde:<f>``,
``tilde-exact:<f>``, ``cf:rel_entropy``, ``cf:fidelity``, ``cf:tsallis:<mu>``,
``cf:robustness``; ``<f>`` is any built-in name such as ``l2`` or ``fk:0.4``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import channels, closedform, monof, nogo, roof, states
from .errors import ImaginarityError, ParamOutOfRange, UnknownName, UnsupportedPair
from .pure import overlap

CLOSED_FORMS = ("rel_entropy", "fidelity", "tsallis", "robustness")
ROBUSTNESS_TOL = 1e-6


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    n_starts: int = 32
    m: int | None = None
    tol: float = 1e-9
    out: str | None = None
    fmt: str = "json"

    def roof_options(self) -> roof.RoofOptions:
        return roof.RoofOptions(m=self.m, n_starts=self.n_starts, seed=self.seed, tol=self.tol)


def fmt9(v: float) -> str:
    return f"{v:.9g}"


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt9(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- measure

def evaluate_spec(spec: str, rho: np.ndarray, cfg: RunConfig) -> dict:
    """One measure on one state, with the metadata every report carries."""
    kind, _, rest = spec.partition(":")
    if kind not in ("roof", "tilde", "tilde-exact", "cf"):
        kind, rest = "roof", spec
    row = {"measure": spec, "seed": cfg.seed, "n_starts": cfg.n_starts, "gap_estimate": 0.0}
    if kind == "cf":
        name, _, arg = rest.partition(":")
        if name == "rel_entropy":
            value = closedform.rel_entropy_imaginarity(rho)
        elif name == "fidelity":
            value = closedform.fidelity_imaginarity(rho)
        elif name == "tsallis":
            value = closedform.tsallis_imaginarity(rho, float(arg) if arg else 0.5)
        elif name == "robustness":
            res = closedform.robustness_imaginarity(rho, ROBUSTNESS_TOL)
            row.update(method="bisection", value=res.s, n_starts=0)
            return row
        else:
            raise UnknownName(f"closed form {name!r}; known: {', '.join(CLOSED_FORMS)}")
        row.update(method="closed-form", value=value, n_starts=0)
        return row
    f = monof.parse(rest)
    opts = cfg.roof_options()
    if kind == "roof":
        res = roof.convex_roof(f, rho, opts)
    elif kind == "tilde":
        res = roof.tilde_measure(f, rho, opts)
    else:
        res = roof.tilde_measure(f, rho, method="exact")
    row.update(
        method=kind, value=res.value, n_starts=res.n_starts, gap_estimate=res.gap_estimate, m=res.m,
        certificate={"n_branches": len(res.certificate), "weights": [float(w) for w in res.certificate.weights]},
    )
    return row


def default_specs() -> list[str]:
    specs = [f"roof:{f.label}" for f in monof.table_one()]
    return specs + ["cf:rel_entropy", "cf:fidelity", "cf:tsallis:0.5", "cf:robustness"]


def cmd_measure(state_path: str, f_specs: list[str] | None, cfg: RunConfig) -> dict:
    rho = states.as_density(states.load_state(state_path))
    rows = [evaluate_spec(s, rho, cfg) for s in (f_specs or default_specs())]
    return {"state": state_path, "dim": int(rho.shape[0]), "seed": cfg.seed, "measures": rows}


def measure_to_csv(report: dict) -> str:
    rows = [[r["measure"], r["method"], float(r["value"]), r["n_starts"], float(r["gap_estimate"]), r["seed"]]
            for r in report["measures"]]
    return to_csv(["measure", "method", "value", "n_starts", "gap_estimate", "seed"], rows)


# ---------------------------------------------------------------- fig1

FIG1_TOL = 1e-4


@dataclass
class Fig1Row:
    param: float
    tilde_formula: float
    roof_formula: float
    tilde_numeric: float
    roof_numeric: float

    @property
    def flag(self) -> str:
        bad = abs(self.tilde_numeric - self.tilde_formula) > FIG1_TOL or abs(self.roof_numeric - self.roof_formula) > FIG1_TOL
        return "MISMATCH" if bad else "ok"


def fig1_rows(variant: str, grid_points: int = 101, opts: roof.RoofOptions | None = None) -> list[Fig1Row]:
    """Tilde and roof on the qutrit family: variant ``a`` sweeps z at
    lam = 0.6 with f = l2; variant ``b`` sweeps lam at z = 0.3 with the
    binary entropy."""
    if grid_points < 2:
        raise ParamOutOfRange("grid_points must be >= 2")
    opts = opts or roof.RoofOptions()
    grid = np.linspace(0.0, 1.0, grid_points)
    if variant == "a":
        f, pairs = monof.builtin("l2"), [(0.6, z) for z in grid]
    elif variant == "b":
        f, pairs = monof.builtin("entropy"), [(lam, 0.3) for lam in grid]
    else:
        raise ParamOutOfRange(f"variant must be 'a' or 'b', got {variant!r}")
    rows = []
    for (lam, z), param in zip(pairs, grid):
        tau = roof.qutrit_family(lam, z)
        tf, rf = roof.qutrit_family_formulas(f, lam, z)
        tn = roof.tilde_measure(f, tau, opts).value
        rn = roof.convex_roof(f, tau, opts).value
        rows.append(Fig1Row(float(param), tf, rf, tn, rn))
    return rows


def fig1_to_csv(rows: list[Fig1Row]) -> str:
    return to_csv(
        ["param", "tilde_formula", "roof_formula", "tilde_numeric", "roof_numeric", "flag"],
        [[r.param, r.tilde_formula, r.roof_formula, r.tilde_numeric, r.roof_numeric, r.flag] for r in rows],
    )


# ---------------------------------------------------------------- convert

def cmd_convert(src_path: str, dst_path: str, out: str | None = None) -> dict:
    src = states.load_state(src_path)
    dst = states.load_state(dst_path)
    if src.ndim == 1 and dst.ndim == 1:
        ok = channels.pure_convertible(src, dst)
        report = {"kind": "pure", "convertible": ok, "overlap_src": overlap(src), "overlap_dst": overlap(dst)}
        if ok:
            ch = channels.pure_conversion_channel(src, dst)
            report["channel_check"] = float(np.max(np.abs(channels.apply(ch, src) - states.projector(dst))))
            if out:
                channels.save_channel(out, ch)
                report["channel"] = out
        return report
    rho, sigma = states.as_density(src), states.as_density(dst)
    if rho.shape == (2, 2) and sigma.shape == (2, 2):
        q = channels.qubit_convertible(rho, sigma)
        return {"kind": "qubit", "convertible": q.ok, "abs_im_src": q.m1_rho, "abs_im_dst": q.m1_sigma,
                "ratio_src": q.m2_rho, "ratio_dst": q.m2_sigma}
    raise UnsupportedPair(
        "no decision procedure for mixed states beyond qubits: no finite set of measures "
        "decides such conversions (see the `nogo` command)"
    )


# ---------------------------------------------------------------- nogo

def parse_grid(spec: str | None) -> nogo.NogoGrid:
    """``"p1=0.05:0.95:0.05 lam=0.05,0.1 eta="``; omitted keys keep their
    defaults and an empty value gives an empty axis."""
    grid = nogo.NogoGrid()
    if not spec:
        return grid
    for item in spec.replace(";", " ").split():
        key, sep, val = item.partition("=")
        if not sep or key not in ("p1", "lam", "eta"):
            raise ParamOutOfRange(f"bad grid item {item!r}")
        if not val:
            axis = ()
        elif ":" in val:
            a, b, h = (float(t) for t in val.split(":"))
            n = int(np.floor((b - a) / h + 1e-9)) + 1
            axis = tuple(round(a + i * h, 10) for i in range(max(0, n)))
        else:
            axis = tuple(float(t) for t in val.split(","))
        setattr(grid, key, axis)
    return grid


def cmd_nogo(f_specs: list[str] | None, grid_spec: str | None, cfg: RunConfig, verify: bool = False) -> dict:
    measures = [monof.parse(s) for s in f_specs] if f_specs else None
    opts = cfg.roof_options()
    w = nogo.find_witness(measures, parse_grid(grid_spec), opts)
    out = w.to_json()
    if verify:
        v = nogo.verify_witness(w, measures, opts)
        out["verification"] = {"ok": v.ok, "max_drift": v.max_drift, "n_starts": v.witness.n_starts,
                               "seed": v.witness.seed}
    return out


# ---------------------------------------------------------------- validate

def cmd_validate(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return {"path": path, "kind": "unknown", "ok": False, "checks": [{"name": "parse", "ok": False, "detail": str(exc)}]}
    if isinstance(obj, dict) and "kraus" in obj:
        try:
            mats = [np.asarray(K, dtype=float) for K in obj["kraus"]]
        except (TypeError, ValueError) as exc:
            return {"path": path, "kind": "channel", "ok": False,
                    "checks": [{"name": "structure", "ok": False, "detail": f"non-real Kraus entry: {exc}"}]}
        rep = channels.validate(mats)
        checks = [
            {"name": "realness", "ok": rep.max_imag <= channels.REAL_TOL, "residual": rep.max_imag},
            {"name": "completeness", "ok": rep.completeness <= channels.COMPLETENESS_TOL, "residual": rep.completeness},
        ]
        return {"path": path, "kind": "channel", "ok": rep.ok, "checks": checks}
    try:
        st = states.state_from_json(obj, validate=False)
    except ImaginarityError as exc:
        return {"path": path, "kind": "state", "ok": False, "checks": [{"name": "structure", "ok": False, "detail": str(exc)}]}
    report = states.pure_violations(st) if st.ndim == 1 else states.density_violations(st)
    checks = [{"name": n, "ok": bool(ok), "residual": float(r)} for n, r, ok in report]
    return {"path": path, "kind": obj.get("kind"), "ok": all(c["ok"] for c in checks), "checks": checks}


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--starts", type=int, default=32)
    common.add_argument("--m", type=int, default=None)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)

    p = argparse.ArgumentParser(prog="imaginarity", description="Imaginarity measures and conversions")
    sub = p.add_subparsers(dest="command", required=True)
    m = sub.add_parser("measure", parents=[common], help="evaluate measures on a state file")
    m.add_argument("state")
    m.add_argument("--f", action="append", dest="f_specs")
    g = sub.add_parser("fig1", parents=[common], help="tilde vs roof on the qutrit family, as CSV")
    g.add_argument("variant", choices=("a", "b"))
    g.add_argument("--grid", type=int, default=101)
    c = sub.add_parser("convert", parents=[common], help="decide a conversion under real operations")
    c.add_argument("src")
    c.add_argument("dst")
    n = sub.add_parser("nogo", parents=[common], help="search for a no-go witness pair")
    n.add_argument("--f", action="append", dest="f_specs")
    n.add_argument("--grid", default=None)
    n.add_argument("--verify", action="store_true")
    v = sub.add_parser("validate", parents=[common], help="check a state or channel file")
    v.add_argument("path")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.seed, args.starts, args.m, args.tol, args.out, args.format or "json")
    try:
        if args.command == "measure":
            report = cmd_measure(args.state, args.f_specs, cfg)
            _emit(measure_to_csv(report) if cfg.fmt == "csv" else to_json(report), cfg.out)
        elif args.command == "fig1":
            rows = fig1_rows(args.variant, args.grid, cfg.roof_options())
            if args.format == "json":
                _emit(to_json({"variant": args.variant, "seed": cfg.seed, "n_starts": cfg.n_starts,
                               "rows": [dict(r.__dict__, flag=r.flag) for r in rows]}), cfg.out)
            else:
                _emit(fig1_to_csv(rows), cfg.out)
        elif args.command == "convert":
            _emit(to_json(cmd_convert(args.src, args.dst, cfg.out)), None)
        elif args.command == "nogo":
            _emit(to_json(cmd_nogo(args.f_specs, args.grid, cfg, args.verify)), cfg.out)
        elif args.command == "validate":
            report = cmd_validate(args.path)
            _emit(to_json(report), cfg.out)
            return 0 if report["ok"] else 1
    except ImaginarityError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
