"""Empirical CFL thresholds: bisect the blow-up boundary per degree.

Runs the vacuum plane wave with each degree's default integrator and
bisects the largest stable CFL number. The shipped defaults in
temax.timestepping are set to roughly 80% of the thresholds this script
reports. Usage: python3 tools/cfl_scan.py [n_cells]
"""

import sys

from temax import runner, timestepping


def stable(k: int, cfl: float, n: int) -> bool:
    import numpy as np
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            rows = runner.converge("planewave", [k], [n], cfl=cfl)
    except runner.BlowUpError:
        return False
    return rows[0]["bz_l2"] < 1.0


def threshold(k: int, n: int, lo: float = 0.01, hi: float = 1.2,
              iters: int = 10) -> float:
    if not stable(k, lo, n):
        raise SystemExit(f"k={k}: unstable even at cfl={lo}")
    while stable(k, hi, n):
        lo, hi = hi, 2.0 * hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if stable(k, mid, n):
            lo = mid
        else:
            hi = mid
    return lo


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 32
    print(f"plane wave, {n}x{n}, default integrators")
    for k in range(5):
        scheme = timestepping.DEFAULT_SCHEME[k]
        t = threshold(k, n)
        print(f"k={k} ({scheme}): threshold ~ {t:.4f}  -> default "
              f"{0.8 * t:.3f} (shipped: {timestepping.DEFAULT_CFL[k]})")


if __name__ == "__main__":
    main()
