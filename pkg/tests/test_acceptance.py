"""End-to-end acceptance suite.

Each test covers one numbered acceptance criterion, prints a single
PASS/FAIL line through the shared recorder and then asserts. The Monte
Carlo criteria use pinned seeds so reruns are reproducible.
"""

import math

import numpy as np
import pytest
from scipy.stats import ks_2samp

from conftest import record_acceptance
from fousldp.energy import c_star, rate_energy, saddle_solve
from fousldp.mle import rate_mle
from fousldp.model import GenFnPoint, ModelParams, exact_lt, in_domain_delta
from fousldp.sim import make_grid, simulate_fbm_batch, simulate_martingale_batch
from fousldp.special import r_h
from fousldp.validate import (
    clt_test,
    gamma_contour_oracle,
    legendre_oracle,
    mc_tail,
)

P = ModelParams(theta=-1.0, hurst=0.75)


def test_criterion_01_exact_generating_function_vs_monte_carlo():
    # five interior tilt points per parameter set; empirical normalized
    # log-moment within 3 standard errors of the closed form at T = 5
    cases = {
        (-1.0, 0.6): [(0.2, 0.2), (-0.2, 0.08), (0.1, -0.5), (-0.4, -0.4), (0.3, -0.2)],
        (-1.0, 0.75): [(0.2, 0.2), (-0.2, 0.08), (0.1, -0.5), (-0.4, -0.4), (0.3, -0.2)],
        (-0.5, 0.9): [(0.1, 0.05), (-0.1, 0.03), (0.05, -0.25), (-0.2, -0.2), (0.15, -0.1)],
    }
    T = 5.0
    worst = 0.0
    ok = True
    for (theta, hurst), points in cases.items():
        params = ModelParams(theta, hurst)
        grid = make_grid(T, 2000)
        res = simulate_martingale_batch(params, grid, seed=1001, replicates=100_000)
        int_q_dy = res.theta_hat * res.s_terminal
        for a, b in points:
            assert in_domain_delta(params, a, b)
            w = np.exp(a * int_q_dy + b * res.s_terminal)
            emp = math.log(w.mean()) / T
            se = w.std(ddof=1) / (w.mean() * math.sqrt(w.size)) / T
            z = (emp - exact_lt(params, GenFnPoint(a, b, T))) / se
            worst = max(worst, abs(z))
            ok = ok and abs(z) <= 3.0
    line = record_acceptance(
        1, ok, f"exact generating function vs MC, worst |z| = {worst:.2f} (<= 3)"
    )
    assert ok, line


def test_criterion_02_bessel_product_degeneracy_at_half():
    zs = np.linspace(0.1, 50.0, 500)
    worst = max(
        abs(r_h(0.5, float(z)) - (math.exp(2 * z) + math.exp(-2 * z)))
        / (math.exp(2 * z) + math.exp(-2 * z))
        for z in zs
    )
    ok = worst <= 1e-12
    line = record_acceptance(
        2, ok, f"H = 1/2 degeneracy, worst relative error = {worst:.2e} (<= 1e-12)"
    )
    assert ok, line


def test_criterion_03_rate_functions_vs_variational_oracles():
    worst = 0.0
    boundary_seen = interior_seen = False
    for c in (0.3, 0.7, 1.5, 2.5, 4.0, 8.0):
        r = legendre_oracle(P, "energy", c)
        worst = max(worst, r.abs_err)
        boundary_seen |= (c > c_star(P)) and ("boundary" in r.note)
        interior_seen |= (c < c_star(P)) and ("interior" in r.note)
    for c in (-1.5, -0.8, -0.5, -0.2, 0.0, 0.5):
        r = legendre_oracle(P, "mle", c)
        worst = max(worst, r.abs_err)
    ok = worst <= 1e-6 and boundary_seen and interior_seen
    line = record_acceptance(
        3, ok, f"Legendre/infimum oracles, worst |error| = {worst:.2e} (<= 1e-6)"
    )
    assert ok, line


def test_criterion_04_rate_function_smoothness_at_branch_points():
    worst = 0.0
    for params in (P, ModelParams(-2.0, 0.85)):
        theta = params.theta
        cs = c_star(params)
        left = (4.0 * theta**2 * cs**2 - 1.0) / (8.0 * cs**2)
        worst = max(worst, abs(left - params.a_h))
        cb = theta / 3.0
        left_mle = (theta**2 - cb**2) / (4.0 * cb**2)
        worst = max(worst, abs(left_mle - 2.0))
    ok = worst <= 1e-12
    line = record_acceptance(
        4, ok, f"C1 branch matching, worst derivative mismatch = {worst:.2e} (<= 1e-12)"
    )
    assert ok, line


def test_criterion_05_central_limit_kolmogorov_smirnov():
    e, m = clt_test(P, 100.0, 5000, seed=2024, grid_n=16000)
    ok = e.below_1pct and m.below_1pct
    line = record_acceptance(
        5,
        ok,
        f"CLT KS at T=100: energy {e.statistic:.4f} "
        f"{'<' if e.below_1pct else '>='} {e.crit_1pct:.4f}, "
        f"estimator {m.statistic:.4f} "
        f"{'<' if m.below_1pct else '>='} {m.crit_1pct:.4f} "
        "(estimator statistic carries an intrinsic -2/T location bias, "
        "about -0.14 standard units at T=100, which no replicate count removes)",
    )
    assert ok, line


def test_criterion_06_sharp_prefactors_vs_monte_carlo():
    reps = 1_000_000
    batches = {
        T: simulate_martingale_batch(P, make_grid(T, 4000), seed=606, replicates=reps)
        for T in (20.0, 40.0)
    }
    e_lead = mc_tail(P, "energy", 0.7, 40.0, reps, seed=606, result=batches[40.0])
    m_lead = mc_tail(P, "mle", -0.6, 40.0, reps, seed=606, result=batches[40.0])
    clause1 = abs(e_lead.z_score) <= 3.0 and abs(m_lead.z_score) <= 3.0
    reductions = []
    for T in (20.0, 40.0):
        lead = mc_tail(P, "energy", 0.7, T, reps, seed=606, result=batches[T])
        try:
            corr = mc_tail(
                P, "energy", 0.7, T, reps, seed=606, result=batches[T], with_order1=True
            )
            reductions.append(abs(corr.z_score) < abs(lead.z_score))
        except ArithmeticError:
            # the corrected approximation is negative at this horizon,
            # which certainly does not reduce the discrepancy
            reductions.append(False)
    ok = clause1 and all(reductions)
    line = record_acceptance(
        6,
        ok,
        f"sharp prefactors at T=40: energy z = {e_lead.z_score:+.1f}, "
        f"estimator z = {m_lead.z_score:+.1f} (band +-3); order-1 reduces |z| "
        f"at T=20: {reductions[0]}, T=40: {reductions[1]} "
        "(the leading-order error is O(1/T) with coefficient about -22 for "
        "the energy and is far larger than the 1e6-replicate binomial band "
        "at these horizons)",
    )
    assert ok, line


def test_criterion_07_saddlepoint_expansion_convergence_orders():
    params = ModelParams(-2.0, 0.85)
    cs = c_star(params)
    Ts = [50.0, 100.0, 200.0, 400.0]
    slopes = {}
    for label, c, target in (("hard", 3.0 * cs, -3.0), ("boundary", cs, -1.5)):
        errs = [
            abs((sol := saddle_solve(params, c, T)).a_T - sol.a_expansion(T))
            for T in Ts
        ]
        slopes[label] = float(np.polyfit(np.log(Ts), np.log(errs), 1)[0])
    ok = abs(slopes["hard"] + 3.0) <= 0.3 and abs(slopes["boundary"] + 1.5) <= 0.3
    line = record_acceptance(
        7,
        ok,
        f"saddlepoint expansion slopes: hard {slopes['hard']:.2f} (-3 +- 0.3), "
        f"boundary {slopes['boundary']:.2f} (-1.5 +- 0.3)",
    )
    assert ok, line


def test_criterion_08_oscillatory_contour_integral_error_orders():
    ok = True
    detail = []
    for a, nu, g, s2 in ((1.0, 0.5, 1.0, 1.0), (2.5, 0.3, 0.7, 2.0)):
        for p in (0, 1, 2):
            Ts = [1e2, 1e3, 1e4]
            errs = [gamma_contour_oracle(a, nu, g, s2, T, 0, p).abs_err for T in Ts]
            slope = float(np.polyfit(np.log(Ts), np.log(errs), 1)[0])
            ok = ok and abs(slope + (p + 1)) <= 0.15 * (p + 1)
            detail.append(f"{slope:.2f}")
    line = record_acceptance(
        8,
        ok,
        "contour quadrature vs series error slopes "
        f"[{', '.join(detail)}] vs -(p+1) +- 15%",
    )
    assert ok, line


def test_criterion_09_cross_simulator_two_sample_agreement():
    grid = make_grid(20.0, 2048)
    rm = simulate_martingale_batch(P, grid, seed=501, replicates=5000)
    rf = simulate_fbm_batch(P, grid, seed=502, replicates=5000)
    stat = float(ks_2samp(rm.s_terminal, rf.s_terminal).statistic)
    crit = 1.628 * math.sqrt(2.0 / 5000.0)
    ok = stat < crit
    line = record_acceptance(
        9, ok, f"martingale vs kernel-whitening two-sample KS {stat:.4f} < {crit:.4f}"
    )
    assert ok, line


def test_criterion_10_underpowered_deep_tail_flagging():
    reps = 100_000
    rep = mc_tail(P, "energy", 6.0, 40.0, reps, seed=102)
    ok = (
        rep.underpowered
        and rep.z_score is None
        and math.isnan(rep.estimate)
        and rep.closed_form < 10.0 / reps
    )
    line = record_acceptance(
        10,
        ok,
        f"deep-tail run flagged underpowered (closed form {rep.closed_form:.2e} "
        f"< {10.0 / reps:.1e})",
    )
    assert ok, line
