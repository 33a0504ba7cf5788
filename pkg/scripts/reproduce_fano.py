"""Monte Carlo Fano factor at the minimum-noise point versus window length."""

import argparse
import math

import numpy as np

from quietlaser import RateParams, analytics, renewal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-traj", type=int, default=50)
    ap.add_argument("--windows", type=int, default=200, help="windows per trajectory")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    p = RateParams(1.25, math.sqrt(12.5))
    limit = analytics.zero_frequency_fano(p)
    print(f"a = {p.a:.4g}, analytic zero-frequency Fano = {limit:.6f}")
    print(f"{'window':>8} {'fano':>9} {'stderr':>9} {'n_windows':>10}")
    for window in np.geomspace(5.0, 200.0, 6):
        ens = renewal.generate_ensemble(p, window * (args.windows + 1), args.n_traj, args.seed, workers=args.workers)
        est = renewal.fano_factor(ens, window)
        print(f"{window:8.1f} {est.fano:9.4f} {est.stderr:9.4f} {est.n_windows:10d}")


if __name__ == "__main__":
    main()
