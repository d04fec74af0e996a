"""Tabulate the two rate functions and their branch structure.

The energy functional S_T and the drift estimator theta_hat_T both obey
large deviation principles. This demo prints their rate functions on a
grid of levels, marks the branch each level belongs to, and shows the
steepness threshold c* where the energy rate switches from the strictly
convex branch to the linear one.

Run:
    python3 demos/rate_functions.py --theta -1.0 --hurst 0.75
"""

import argparse

import numpy as np

from fousldp.energy import c_star, classify_branch, rate_energy
from fousldp.mle import classify_mle, rate_mle
from fousldp.model import ModelParams


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=-1.0)
    ap.add_argument("--hurst", type=float, default=0.75)
    args = ap.parse_args()
    params = ModelParams(theta=args.theta, hurst=args.hurst)

    cs = c_star(params)
    print(f"theta = {params.theta}, H = {params.hurst}")
    print(f"steepness threshold c* = {cs:.6f}")
    print(f"ergodic mean of S_T/T  = {-1.0 / (2.0 * params.theta):.6f}")
    print()

    print("energy rate function")
    print(f"{'c':>8} {'I(c)':>12} branch")
    for c in np.linspace(0.1, 2.0 * cs, 12):
        branch = classify_branch(params, float(c), 100.0).name
        print(f"{c:8.3f} {rate_energy(params, float(c)):12.6f} {branch}")
    print()

    print("estimator rate function (free of H)")
    print(f"{'c':>8} {'I(c)':>12} branch")
    for c in np.linspace(3.0 * params.theta, -params.theta, 12):
        branch = classify_mle(params, float(c), 100.0).name
        print(f"{c:8.3f} {rate_mle(params, float(c)):12.6f} {branch}")


if __name__ == "__main__":
    main()
