"""End-to-end acceptance checks. Each test records one PASS/FAIL line that
is printed in the terminal summary."""
import time

import numpy as np

from imaginarity import channels, cli, closedform, monof, nogo, roof
from imaginarity.pure import canonical_form, overlap, overlap_via_im_parts
from imaginarity.roof import RoofOptions
from imaginarity.states import Ensemble, direct_sum, projector, sample_density, sample_pure

from conftest import qubit, record

GEO = monof.builtin("geometric")
L2 = monof.builtin("l2")
RR = monof.builtin("robustness_row")


def random_qubit(rng):
    return sample_density(2, 2, int(rng.integers(2**31)))


def test_qutrit_curve_l2_over_z():
    t0 = time.perf_counter()
    rows = cli.fig1_rows("a", 101)
    elapsed = time.perf_counter() - t0
    err = max(max(abs(r.tilde_numeric - r.tilde_formula), abs(r.roof_numeric - r.roof_formula)) for r in rows)
    ok = len(rows) == 101 and err <= 1e-4 and elapsed < 120
    record(1, "fig1a", ok, f"max err {err:.2e}, {elapsed:.1f} s")
    assert ok


def test_qutrit_curve_entropy_over_lambda():
    rows = cli.fig1_rows("b", 101)
    err = max(max(abs(r.tilde_numeric - r.tilde_formula), abs(r.roof_numeric - r.roof_formula)) for r in rows)
    margin = np.array([r.tilde_numeric - r.roof_numeric for r in rows])
    inner = margin[1:-1]
    peak = int(np.argmax(margin))
    rises = np.all(np.diff(margin[: peak + 1]) > -1e-7)
    falls = np.all(np.diff(margin[peak:]) < 1e-7)
    ok = err <= 1e-4 and np.all(inner > 0) and rises and falls and 0 < peak < 100
    record(2, "fig1b", ok, f"max err {err:.2e}, min margin {inner.min():.2e}, peak at lam={rows[peak].param:.2f}")
    assert ok


def test_qubit_closed_forms():
    rng = np.random.default_rng(3)
    opts = RoofOptions(n_starts=8)
    roof_err = tilde_err = 0.0
    for _ in range(100):
        rho = random_qubit(rng)
        b = abs(rho[0, 1].imag)
        roof_err = max(roof_err, abs(roof.convex_roof(RR, rho, opts).value - b))
        x = np.sqrt(max(0.0, 1 - 4 * b**2))
        for f in (L2, GEO, monof.builtin("entropy")):
            tilde_err = max(tilde_err, abs(roof.tilde_measure(f, rho, opts).value - f(x)))
    ok = roof_err <= 1e-6 and tilde_err <= 1e-6
    record(3, "qubit closed forms", ok, f"roof err {roof_err:.2e}, tilde err {tilde_err:.2e}")
    assert ok


def test_overlap_identity():
    err = 0.0
    for s in range(1000):
        psi = sample_pure(2 + s % 7, [11, s])
        err = max(err, abs(overlap(psi) - overlap_via_im_parts(psi)))
    ok = err <= 1e-10
    record(4, "overlap identity", ok, f"max err {err:.2e}")
    assert ok


def test_ensemble_constructions():
    rng = np.random.default_rng(5)
    orth = comp = recon = 0.0
    for s in range(50):
        d, n = int(rng.integers(2, 5)), int(rng.integers(1, 5))
        w = rng.random(n) + 0.05
        ens = Ensemble(w / w.sum(), np.array([sample_pure(d, [s, k]) for k in range(n)]))
        for psi in ens.states:
            O = canonical_form(psi).O
            orth = max(orth, float(np.max(np.abs(O.T @ O - np.eye(d)))))
        ec = channels.ensemble_channel(ens)
        comp = max(comp, ec.channel.completeness_residual())
        recon = max(recon, float(np.max(np.abs(channels.apply(ec.channel, ec.eta) - ens.density()))))
    ok = orth <= 1e-10 and comp <= 1e-9 and recon <= 1e-9
    record(5, "ensemble channels", ok, f"orth {orth:.2e}, completeness {comp:.2e}, reconstruction {recon:.2e}")
    assert ok


def test_pure_state_table():
    h = monof.builtin("entropy")
    err = 0.0
    for s in range(200):
        psi = sample_pure(2 + s % 4, [13, s])
        x = overlap(psi)
        rho = projector(psi)
        diffs = [
            closedform.rel_entropy_imaginarity(rho) - h(x),
            closedform.fidelity_imaginarity(rho) - (1 - x),
            roof.convex_roof(GEO, rho).value - (1 - x) / 2,
        ]
        diffs += [closedform.tsallis_imaginarity(rho, mu) - (1 - x**2) for mu in (0.25, 0.5, 0.75)]
        err = max(err, max(abs(v) for v in diffs))
    ok = err <= 1e-8
    record(6, "pure-state table", ok, f"max err {err:.2e}")
    assert ok


def test_monotone_under_real_channels():
    rng = np.random.default_rng(7)
    opts = RoofOptions(n_starts=8)
    worst_map = worst_avg = -np.inf
    for s in range(50):
        d_in = int(rng.integers(2, 5))
        d_out = int(rng.integers(2, 4))
        rho = sample_density(d_in, int(rng.integers(1, 3)), [17, s])
        ch = channels.random_real_channel(d_in, d_out, 2, [19, s])
        out = channels.apply(ch, rho)
        br = channels.branches(ch, rho)
        for f in monof.registry():
            base = roof.convex_roof(f, rho, opts).value
            worst_map = max(worst_map, roof.convex_roof(f, out, opts).value - base)
            avg = sum(p * roof.convex_roof(f, b, opts).value for p, b in br)
            worst_avg = max(worst_avg, avg - base)
    ok = worst_map <= 2e-5 and worst_avg <= 2e-5
    record(7, "monotonicity", ok, f"max increase {worst_map:.2e}, branch-average {worst_avg:.2e}")
    assert ok


def test_direct_sum_additivity():
    rng = np.random.default_rng(9)
    opts = RoofOptions(n_starts=8)
    err = 0.0
    for s in range(25):
        d1, d2 = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        r1, r2 = sample_density(d1, 2, [23, s]), sample_density(d2, 2, [29, s])
        p = float(rng.uniform(0.1, 0.9))
        rho = direct_sum(p, r1, r2)
        for f in (GEO, L2):
            parts = p * roof.convex_roof(f, r1, opts).value + (1 - p) * roof.convex_roof(f, r2, opts).value
            err = max(err, abs(roof.convex_roof(f, rho, opts).value - parts))
    ok = err <= 2e-5
    record(8, "direct-sum additivity", ok, f"max err {err:.2e}")
    assert ok


def test_nogo_witness():
    t0 = time.perf_counter()
    w = nogo.find_witness()
    v = nogo.verify_witness(w)
    elapsed = time.perf_counter() - t0
    ok = w.holds() and v.ok and v.witness.n_starts == 2 * w.n_starts and elapsed < 300
    record(9, "no-go witness", ok,
           f"p1={w.p1} lam={w.lam} eta={w.eta} k={w.k}, drift {v.max_drift:.2e}, {elapsed:.1f} s")
    assert ok


def test_robustness_solver():
    err = 0.0
    for b in np.arange(1, 10) * 0.05:
        rho = qubit(0.5, 0.1 + 1j * b)
        oracle = 2 * abs(rho[0, 1].imag)
        err = max(err, abs(closedform.robustness_imaginarity(rho).s - oracle))
    real = max(closedform.robustness_imaginarity(sample_density(d, d, d).real.astype(complex)).s for d in (2, 3, 4))
    ok = err <= 1e-4 and real == 0.0
    record(10, "robustness", ok, f"max err {err:.2e}, real states {real}")
    assert ok


def test_tilde_dominates_roof():
    rng = np.random.default_rng(31)
    opts = RoofOptions(n_starts=4)
    worst = np.inf
    for s in range(100):
        d = int(rng.integers(2, 5))
        rho = sample_density(d, int(rng.integers(2, d + 1)), [37, s])
        for f in monof.registry():
            gap = roof.tilde_measure(f, rho, method="exact").value - roof.convex_roof(f, rho, opts).value
            worst = min(worst, gap)
    eq = 0.0
    for lam in (0.2, 0.5, 0.8):
        for z in (0.1, 0.4, 0.7):
            tau = roof.qutrit_family(lam, z)
            eq = max(eq, abs(roof.tilde_measure(GEO, tau).value - roof.convex_roof(GEO, tau).value))
    ok = worst >= -1e-7 and eq <= 1e-6
    record(11, "tilde >= roof", ok, f"min gap {worst:.2e}, geometric family diff {eq:.2e}")
    assert ok
