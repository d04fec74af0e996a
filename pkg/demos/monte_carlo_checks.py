"""Monte Carlo validation of the closed forms at desk scale.

Three quick cross-checks tie the analytic layer to simulation: a tail
probability compared against its sharp approximation with a z-score, the
two central limit statistics tested against the standard normal by
Kolmogorov-Smirnov, and the underpowered guard that refuses to compare
when the target event is too rare for the replicate budget.

Run:
    python3 demos/monte_carlo_checks.py --theta -1.0 --hurst 0.75
"""

import argparse

from fousldp.model import ModelParams
from fousldp.validate import clt_test, mc_tail


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=-1.0)
    ap.add_argument("--hurst", type=float, default=0.75)
    ap.add_argument("--replicates", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()
    params = ModelParams(theta=args.theta, hurst=args.hurst)

    rep = mc_tail(params, "energy", 0.7, 40.0, args.replicates, seed=args.seed)
    print("tail comparison P(S_T >= 0.7 T) at T = 40")
    print(f"  estimate     {rep.estimate:.5e} +- {rep.std_error:.1e}")
    print(f"  closed form  {rep.closed_form:.5e}  (leading order)")
    print(f"  z-score      {rep.z_score:+.1f}")
    print("  the leading-order error is O(1/T); at T = 40 it dominates the")
    print("  Monte Carlo band, which is what the order-1 term quantifies")
    print()

    e, m = clt_test(params, 50.0, 3000, seed=args.seed, grid_n=4000)
    print("central limit statistics at T = 50, 3000 replicates")
    for r in (e, m):
        verdict = "below" if r.below_1pct else "above"
        print(f"  {r.label}: KS {r.statistic:.4f} ({verdict} 1% critical {r.crit_1pct:.4f})")
    print()

    deep = mc_tail(params, "energy", 6.0, 40.0, 20_000, seed=args.seed)
    print("deep-tail honesty at c = 6")
    print(f"  closed form {deep.closed_form:.2e}, underpowered = {deep.underpowered}")


if __name__ == "__main__":
    main()
