"""Scalar saddle solve and the closed-form performance predictions."""

import math

import numpy as np
import pytest
from scipy import optimize

from boxlasso.config import SystemConfig
from boxlasso.core import BoxBounds, UNBOUNDED_BOX, q_function
from boxlasso.errors import InconsistentSolution
from boxlasso.predictor import (
    ScalarSolution,
    predict_eer,
    predict_goodput,
    predict_mse,
    predict_objective,
    predict_residual,
    predict_support_probs,
    scalar_objective,
    solve_scalar,
    solve_scalar_multistart,
    support_probs_bernoulli,
)
from boxlasso.priors import Prior

CFG = SystemConfig(
    eta=1.5, kappa=0.2, tau=2.5, tau_t=1.14, nu=0.6, total_power=10.0, n=400
)
PRIOR = Prior.sparse_bernoulli(0.2, 1.0)
BOX = BoxBounds(0.0, 1.0)


class TestObjectiveShape:
    def test_positive_inputs_required(self):
        with pytest.raises(ValueError):
            scalar_objective(0.0, 1.0, CFG, 0.5, PRIOR, BOX)
        with pytest.raises(ValueError):
            scalar_objective(1.0, -1.0, CFG, 0.5, PRIOR, BOX)
        with pytest.raises(ValueError):
            scalar_objective(1.0, 1.0, CFG, -0.5, PRIOR, BOX)

    def test_vanishes_as_beta_shrinks(self):
        # every term carries a factor of beta
        value = scalar_objective(1e-9, 0.7, CFG, 0.5, PRIOR, BOX)
        assert abs(value) < 1e-7

    def test_convex_in_lambda_at_saddle(self):
        sol = solve_scalar(CFG, 0.5, PRIOR, BOX)
        lams = np.geomspace(sol.lambda_star / 3.0, sol.lambda_star * 3.0, 21)
        vals = np.array(
            [scalar_objective(sol.beta_star, l, CFG, 0.5, PRIOR, BOX) for l in lams]
        )
        assert np.all(np.diff(vals, 2) > -1e-9)
        assert vals.min() >= sol.objective - 1e-7

    def test_concave_in_beta_at_saddle(self):
        sol = solve_scalar(CFG, 0.5, PRIOR, BOX)
        betas = np.geomspace(sol.beta_star / 3.0, sol.beta_star * 3.0, 21)
        vals = np.array(
            [scalar_objective(b, sol.lambda_star, CFG, 0.5, PRIOR, BOX) for b in betas]
        )
        assert np.all(np.diff(vals, 2) < 1e-9)
        assert vals.max() <= sol.objective + 1e-7


class TestSaddleSolve:
    def test_matches_scipy_nested_search(self):
        gamma = 0.5

        def inner(beta):
            res = optimize.minimize_scalar(
                lambda lam: scalar_objective(beta, lam, CFG, gamma, PRIOR, BOX),
                bounds=(1e-3, 1e3),
                method="bounded",
                options={"xatol": 1e-10},
            )
            return res.x, res.fun

        outer = optimize.minimize_scalar(
            lambda beta: -inner(beta)[1],
            bounds=(1e-3, 1e3),
            method="bounded",
            options={"xatol": 1e-10},
        )
        lam_ref, val_ref = inner(outer.x)

        sol = solve_scalar(CFG, gamma, PRIOR, BOX)
        assert sol.beta_star == pytest.approx(outer.x, rel=1e-5)
        assert sol.lambda_star == pytest.approx(lam_ref, rel=1e-5)
        assert sol.objective == pytest.approx(val_ref, rel=1e-8)

    def test_stationarity_residual_is_small(self):
        sol = solve_scalar(CFG, 0.5, PRIOR, BOX)
        assert sol.stationarity_residual <= 1e-5

    def test_records_signal_energy(self):
        sol = solve_scalar(CFG, 0.5, PRIOR, BOX)
        assert sol.signal_energy == PRIOR.second_moment

    def test_multistart_agrees_with_single_solve(self):
        base = solve_scalar(CFG, 0.5, PRIOR, BOX)
        multi = solve_scalar_multistart(CFG, 0.5, PRIOR, BOX, starts=4)
        assert multi.beta_star == base.beta_star
        assert multi.lambda_star == base.lambda_star

    def test_gamma_zero_needs_identifiability(self):
        wide = SystemConfig(
            eta=0.8, kappa=0.1, tau=2.5, tau_t=1.0, nu=0.5, total_power=10.0, n=100
        )
        with pytest.raises(ValueError):
            solve_scalar(wide, 0.0, PRIOR, UNBOUNDED_BOX)
        # a box restores a unique minimizer even without regularization
        sol = solve_scalar(wide, 0.0, PRIOR, BOX)
        assert sol.beta_star > 0.0

    def test_nan_gamma_rejected(self):
        with pytest.raises(ValueError):
            solve_scalar(CFG, math.nan, PRIOR, BOX)


class TestMetrics:
    def test_mse_formula(self):
        sol = solve_scalar(CFG, 0.5, PRIOR, BOX)
        expected = (
            1.0 / sol.lambda_star**2
            - 1.0
            - PRIOR.second_moment * CFG.p_data * CFG.sigma_w2
        ) / (CFG.p_data * CFG.sigma_h2)
        assert predict_mse(sol, CFG) == pytest.approx(expected, rel=1e-14)
        assert predict_residual(sol) == pytest.approx(0.25 * sol.beta_star**2)
        assert predict_objective(sol) == sol.objective

    def test_negative_mse_is_flagged(self):
        fake = ScalarSolution(1.0, 50.0, 0.0, 0.0, PRIOR.second_moment)
        with pytest.raises(InconsistentSolution):
            predict_mse(fake, CFG)

    def test_bernoulli_closed_form_matches_general_path(self):
        for gamma in (0.05, 0.5, 2.0):
            sol = solve_scalar(CFG, gamma, PRIOR, BOX)
            for zeta in (0.05, 0.3, 0.7):
                general = predict_support_probs(sol, CFG, gamma, PRIOR, BOX, zeta)
                closed = support_probs_bernoulli(sol, CFG, gamma, 1.0, zeta)
                assert general[0] == pytest.approx(closed[0], abs=1e-10)
                assert general[1] == pytest.approx(closed[1], abs=1e-10)

    def test_eer_is_miss_plus_false_alarm(self):
        for gamma in (0.1, 1.0):
            sol = solve_scalar(CFG, gamma, PRIOR, BOX)
            for zeta in (0.1, 0.5):
                psi_on, psi_off = predict_support_probs(
                    sol, CFG, gamma, PRIOR, BOX, zeta
                )
                eer = predict_eer(sol, CFG, gamma, zeta)
                assert eer == pytest.approx(2.0 - psi_on - psi_off, abs=1e-12)

    def test_eer_shrinks_with_power(self):
        quiet = solve_scalar(CFG, 0.5, PRIOR, BOX)
        loud_cfg = SystemConfig(
            eta=1.5, kappa=0.2, tau=2.5, tau_t=1.14, nu=0.6,
            total_power=10_000.0, n=400,
        )
        loud = solve_scalar(loud_cfg, 0.5, PRIOR, BOX)
        assert predict_eer(loud, loud_cfg, 0.5, 0.5) < 1e-4
        assert predict_eer(loud, loud_cfg, 0.5, 0.5) < predict_eer(quiet, CFG, 0.5, 0.5)

    def test_support_prob_edge_cases(self):
        sol = solve_scalar(CFG, 0.5, PRIOR, BOX)
        with pytest.raises(ValueError):
            predict_support_probs(sol, CFG, 0.5, PRIOR, BOX, 0.0)
        with pytest.raises(ValueError):
            predict_support_probs(sol, CFG, 0.5, Prior.point_mass_zero(), BOX, 0.1)
        with pytest.raises(ValueError):
            support_probs_bernoulli(sol, CFG, 0.5, 1.0, 1.5)
        with pytest.raises(ValueError):
            predict_eer(sol, CFG, 0.5, 1.0)

    def test_gaussian_prior_support_probs_match_quadrature_oracle(self):
        prior = Prior.sparse_gaussian(0.15, 1.2)
        box = BoxBounds(-1.0, 1.0)
        gamma = 0.3
        sol = solve_scalar(CFG, gamma, prior, box)
        psi_on, psi_off = predict_support_probs(sol, CFG, gamma, prior, box, 0.2)
        sigma = 1.0 / (sol.lambda_star * math.sqrt(CFG.eta * CFG.p_data * CFG.sigma_h2))
        h = gamma / (
            sol.beta_star * sol.lambda_star * math.sqrt(CFG.eta) * CFG.sigma_h2
        )
        # brute Monte Carlo over the nonzero prior component
        rng = np.random.default_rng(5)
        s0 = math.sqrt(prior.variance) * rng.standard_normal(400_000)
        a = s0 + sigma * rng.standard_normal(s0.size)
        shrunk = np.clip(np.sign(a) * np.maximum(np.abs(a) - h, 0.0), -1.0, 1.0)
        mc_on = float(np.mean(np.abs(shrunk) >= 0.2))
        assert psi_on == pytest.approx(mc_on, abs=0.01)
        expected_off = 1.0 - 2.0 * q_function((0.2 + h) / sigma)
        assert psi_off == pytest.approx(expected_off, abs=1e-12)

    def test_goodput(self):
        assert predict_goodput(CFG, 0.0) == pytest.approx(1.0 - CFG.tau_t / CFG.tau)
        assert predict_goodput(CFG, 1.0) == 0.0
        with pytest.raises(ValueError):
            predict_goodput(CFG, 2.5)
        with pytest.raises(ValueError):
            predict_goodput(CFG, -0.1)
