"""Sharp tail approximations across branches and horizons.

For a fixed level the tail probability decays like exp(-T I(c)) times an
explicit prefactor: 1/sqrt(T) on the saddlepoint branches and T^(-1/4)
exactly at the steepness threshold. This demo prints the approximations
for the energy and the drift estimator over a range of horizons, with
the order-1 correction on the interior energy branch.

Run:
    python3 demos/tail_approximations.py --theta -1.0 --hurst 0.75
"""

import argparse

from fousldp.energy import c_star, tail_energy
from fousldp.mle import tail_mle
from fousldp.model import ModelParams


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=-1.0)
    ap.add_argument("--hurst", type=float, default=0.75)
    args = ap.parse_args()
    params = ModelParams(theta=args.theta, hurst=args.hurst)
    cs = c_star(params)

    print("energy tails P(S_T >= cT)")
    header = f"{'c':>8} {'branch':>10} {'T':>6} {'leading':>13} {'order-1':>13}"
    print(header)
    for c in (0.7, cs, 1.5 * cs):
        for T in (50.0, 100.0, 200.0):
            ta = tail_energy(params, c, T, with_order1=True)
            lead = tail_energy(params, c, T)
            corr = f"{ta.value(T):13.6e}" if ta.order1 is not None else f"{'-':>13}"
            print(f"{c:8.3f} {ta.branch.name:>10} {T:6.0f} {lead.value(T):13.6e} {corr}")
    print()

    print("estimator tails")
    print(f"{'c':>8} {'branch':>10} {'tail':>6} {'T':>6} {'value':>13}")
    for c in (2.0 * params.theta, params.theta / 3.0, 0.0, -params.theta / 2.0):
        for T in (50.0, 100.0):
            ta = tail_mle(params, c, T)
            side = "lower" if ta.lower_tail else "upper"
            print(f"{c:8.3f} {ta.branch.name:>10} {side:>6} {T:6.0f} {ta.value(T):13.6e}")


if __name__ == "__main__":
    main()
