"""Search the default grid for a pair of states that the five standard roof
measures allow to convert while an f_k measure forbids it, then re-check the
witness with twice as many starts."""
import sys
import time

from imaginarity import nogo


def main():
    t0 = time.perf_counter()
    w = nogo.find_witness()
    print(f"witness after {w.grid_points_checked} grid points: "
          f"p1={w.p1} lambda={w.lam} eta={w.eta} k={w.k}")
    print(f"{'measure':<16}{'rho':>12}{'sigma':>12}")
    for name in w.measure_values_rho:
        print(f"{name:<16}{w.measure_values_rho[name]:>12.6f}{w.measure_values_sigma[name]:>12.6f}")
    print(f"{'f_k':<16}{w.fk_rho:>12.6f}{w.fk_sigma:>12.6f}   (closed form on rho: {w.fk_rho_direct:.6f})")
    v = nogo.verify_witness(w)
    print(f"verification with {v.witness.n_starts} starts: ok={v.ok}, max drift {v.max_drift:.2e}")
    print(f"{time.perf_counter() - t0:.1f} s")
    return 0 if v.ok else 1


if __name__ == "__main__":
    sys.exit(main())
