"""Tests of the Monte Carlo harness and numerical oracles."""

import math

import numpy as np
import pytest

from fousldp.energy import c_star
from fousldp.model import ModelParams
from fousldp.validate import (
    clt_test,
    gamma_contour_oracle,
    gamma_contour_series,
    gamma_density_deriv,
    ks_critical_value,
    legendre_oracle,
    mc_tail,
)

P = ModelParams(theta=-1.0, hurst=0.75)


class TestLegendreOracle:
    @pytest.mark.parametrize("c", [0.3, 0.7, 1.0, 1.8, 6.0, 10.0])
    def test_energy_agreement(self, c):
        r = legendre_oracle(P, "energy", c)
        assert r.abs_err < 1e-6, r

    def test_energy_reference_value(self):
        r = legendre_oracle(P, "energy", 1.0)
        assert r.lhs == pytest.approx(0.125, abs=1e-6)

    @pytest.mark.parametrize("c", [-1.5, -0.8, -0.5, -0.2, 0.001, 0.5])
    def test_mle_agreement(self, c):
        r = legendre_oracle(P, "mle", c)
        assert r.abs_err < 1e-6, r

    def test_mle_reference_value(self):
        r = legendre_oracle(P, "mle", -0.5)
        assert r.lhs == pytest.approx(0.125, abs=1e-6)

    def test_boundary_maximizer_beyond_threshold(self):
        # non-steepness: for c > c_star the maximizer sits at the boundary
        r = legendre_oracle(P, "energy", c_star(P) + 2.0)
        assert "boundary" in r.note
        r_in = legendre_oracle(P, "energy", 0.7)
        assert "interior" in r_in.note

    def test_unknown_target(self):
        with pytest.raises(ValueError):
            legendre_oracle(P, "drift", 0.5)


class TestGammaDensityDeriv:
    def test_density_itself(self):
        # m = 0 reduces to the density value
        a, b = 2.5, 1.3
        f = b**a / math.gamma(a) * math.exp(-b)
        assert gamma_density_deriv(a, b, 0) == pytest.approx(f, rel=1e-14)

    def test_exponential_case(self):
        # a = 1: f(x) = b e^{-bx}, f^(m)(1) = (-b)^m b e^{-b}
        b = 0.7
        for m in range(6):
            expect = (-b) ** m * b * math.exp(-b)
            assert gamma_density_deriv(1.0, b, m) == pytest.approx(expect, rel=1e-13)

    def test_against_finite_difference(self):
        a, b = 2.5, 0.9
        h = 1e-5
        f = lambda x: gamma_density_deriv(a, b, 0, x)
        num = (f(1 + h) - f(1 - h)) / (2 * h)
        assert gamma_density_deriv(a, b, 1) == pytest.approx(num, rel=1e-8)
        num2 = (f(1 + h) - 2 * f(1.0) + f(1 - h)) / h**2
        assert gamma_density_deriv(a, b, 2) == pytest.approx(num2, rel=1e-5)

    def test_invalid(self):
        with pytest.raises(ValueError):
            gamma_density_deriv(-1.0, 1.0, 0)


class TestGammaContour:
    def test_leading_term_limit(self):
        # T large: integral -> v_0 = 2 pi f_{1, gamma}(1)/gamma = 2 pi e^{-gamma}
        r = gamma_contour_oracle(1.0, 0.5, 1.0, 1.0, 1e6, ell=0, p=0)
        assert r.lhs == pytest.approx(2.0 * math.pi * math.exp(-1.0), rel=1e-5)

    def test_symmetry_residual(self):
        r = gamma_contour_oracle(2.5, 0.3, 0.7, 2.0, 1e3, ell=0, p=1)
        resid = float(r.note.split()[-1])
        assert resid < 1e-8

    def test_odd_ell_is_imaginary(self):
        r = gamma_contour_oracle(1.0, 0.5, 1.0, 1.0, 1e3, ell=1, p=1)
        # the comparison is on the imaginary part and must be tight
        assert r.rel_err < 1e-4

    @pytest.mark.parametrize("params", [(1.0, 0.5, 1.0, 1.0), (2.5, 0.3, 0.7, 2.0)])
    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_error_slope(self, params, p):
        a, nu, g, s2 = params
        Ts = [1e2, 1e3, 1e4]
        errs = [gamma_contour_oracle(a, nu, g, s2, T, 0, p).abs_err for T in Ts]
        slope = np.polyfit(np.log(Ts), np.log(errs), 1)[0]
        assert slope == pytest.approx(-(p + 1), abs=0.15 * (p + 1))

    def test_series_pure_parity(self):
        s_even = gamma_contour_series(1.5, 0.4, 0.8, 1.0, 100.0, ell=2, p=2)
        assert s_even.imag == 0.0
        s_odd = gamma_contour_series(1.5, 0.4, 0.8, 1.0, 100.0, ell=1, p=2)
        assert s_odd.real == 0.0

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            gamma_contour_oracle(-1.0, 0.5, 1.0, 1.0, 100.0)
        with pytest.raises(ValueError):
            gamma_contour_oracle(1.0, 0.5, 1.0, 1.0, 100.0, ell=-1)


class TestMcTail:
    def test_energy_moderate_deviation(self):
        rep = mc_tail(P, "energy", 0.7, 40.0, 100_000, seed=101)
        assert not rep.underpowered
        assert rep.std_error > 0
        assert rep.z_score == pytest.approx(
            (rep.estimate - rep.closed_form) / rep.std_error
        )

    def test_underpowered_flag(self):
        # deep in the hard branch the closed form is far below 10/replicates
        rep = mc_tail(P, "energy", 6.0, 40.0, 100_000, seed=102)
        assert rep.underpowered
        assert rep.z_score is None
        assert math.isnan(rep.estimate)
        assert rep.closed_form < 10.0 / 100_000

    def test_reuse_of_batch(self):
        from fousldp.sim import make_grid, simulate_martingale_batch

        grid = make_grid(40.0, 2000)
        res = simulate_martingale_batch(P, grid, seed=103, replicates=20000)
        a = mc_tail(P, "energy", 0.7, 40.0, 20000, seed=103, result=res)
        b = mc_tail(P, "energy", 0.7, 40.0, 20000, seed=103, result=res)
        assert a.estimate == b.estimate

    def test_replicate_floor(self):
        with pytest.raises(ValueError):
            mc_tail(P, "energy", 0.7, 40.0, 100, seed=1)

    def test_unknown_target(self):
        with pytest.raises(ValueError):
            mc_tail(P, "spectrum", 0.7, 40.0, 10_000, seed=1)


class TestCltTest:
    def test_reports(self):
        # the energy statistic needs a fine grid at T = 100 to keep the
        # discretization bias below the 1% band; the estimator statistic
        # carries an intrinsic O(1/T) bias of about -0.13 standard units
        # at this horizon, so only its well-formedness is asserted here
        e, m = clt_test(P, 100.0, 2000, seed=2024, grid_n=16000)
        assert e.n == m.n == 2000
        assert e.crit_1pct == pytest.approx(1.628 / math.sqrt(2000), rel=1e-12)
        assert e.statistic < e.crit_1pct
        assert 0.0 < m.statistic < 0.1

    def test_critical_values(self):
        assert ks_critical_value(100, 0.05) == pytest.approx(0.1358, rel=1e-12)
        with pytest.raises(ValueError):
            ks_critical_value(100, 0.10)

    def test_preasymptotic_flagging(self):
        # a very short horizon is allowed to fail the 1% criterion; the
        # report itself must still be well-formed
        e, m = clt_test(P, 10.0, 1000, seed=43, grid_n=500)
        assert e.statistic > 0
        assert m.statistic > 0
