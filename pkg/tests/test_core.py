"""Shrinkage operator, objective, Gaussian tails, truncated moments."""

import math

import numpy as np
import pytest
from scipy import integrate

from boxlasso.core import (
    BoxBounds,
    UNBOUNDED_BOX,
    normal_pdf,
    q_function,
    saturated_shrinkage,
    shrinkage_objective,
    truncated_moments,
)


def _objective(s, a, gamma):
    return 0.5 * (s - a) ** 2 + gamma * np.abs(s)


def _candidate_minimum(a, gamma, box):
    """Exact minimum by evaluating every stationary/kink/edge candidate.

    The objective is piecewise quadratic in s with unconstrained piece
    minimizers a - gamma (s > 0) and a + gamma (s < 0); adding the kink at
    0 and the box edges covers every possible argmin.
    """
    a = np.asarray(a, dtype=float)
    cands = np.stack(
        [
            np.zeros_like(a),
            np.clip(np.full_like(a, box.lower), box.lower, box.upper),
            np.clip(np.full_like(a, box.upper), box.lower, box.upper),
            np.clip(a - gamma, box.lower, box.upper),
            np.clip(a + gamma, box.lower, box.upper),
        ]
    )
    with np.errstate(invalid="ignore"):
        vals = _objective(cands, a, gamma)
    vals = np.where(np.isnan(vals), np.inf, vals)
    best = np.argmin(vals, axis=0)
    idx = np.arange(a.size)
    return cands[best, idx], vals[best, idx]


class TestBoxBounds:
    def test_valid_and_coerced(self):
        box = BoxBounds(0, 1)
        assert box.lower == 0.0 and isinstance(box.lower, float)
        assert box.bounded and not box.unconstrained

    def test_unbounded(self):
        assert UNBOUNDED_BOX.unconstrained
        assert not UNBOUNDED_BOX.bounded

    def test_must_contain_zero(self):
        with pytest.raises(ValueError):
            BoxBounds(0.1, 1.0)
        with pytest.raises(ValueError):
            BoxBounds(-1.0, -0.1)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            BoxBounds(math.nan, 1.0)


class TestSaturatedShrinkage:
    BOX = BoxBounds(-1.0, 2.0)

    @pytest.mark.parametrize(
        "a, expected_h, expected_j",
        [
            (3.0, 2.0, 1.5),      # saturates at the upper edge
            (1.0, 0.5, 0.375),    # positive shrinkage
            (0.3, 0.0, 0.045),    # dead zone
            (-0.8, -0.3, 0.275),  # negative shrinkage
            (-2.0, -1.0, 1.0),    # saturates at the lower edge
        ],
    )
    def test_five_regimes(self, a, expected_h, expected_j):
        gamma = 0.5
        assert saturated_shrinkage(a, gamma, self.BOX) == pytest.approx(expected_h)
        assert shrinkage_objective(a, gamma, self.BOX) == pytest.approx(expected_j)

    def test_negative_gamma_rejected(self):
        with pytest.raises(ValueError):
            saturated_shrinkage(1.0, -0.1, self.BOX)
        with pytest.raises(ValueError):
            shrinkage_objective(1.0, math.nan, self.BOX)

    def test_matches_soft_threshold_then_clip(self):
        rng = np.random.default_rng(0)
        for _ in range(2000):
            a = rng.normal() * 3.0
            gamma = rng.uniform(0.0, 2.0)
            box = BoxBounds(-rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0))
            soft = math.copysign(max(abs(a) - gamma, 0.0), a)
            clipped = min(max(soft, box.lower), box.upper)
            assert saturated_shrinkage(a, gamma, box) == pytest.approx(
                clipped, abs=1e-12
            )

    def test_matches_candidate_oracle(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=5000) * 4.0
        for box in (BoxBounds(-1.0, 1.0), BoxBounds(0.0, 1.0), UNBOUNDED_BOX,
                    BoxBounds(-math.inf, 2.0)):
            for gamma in (0.0, 0.05, 0.7, 3.0):
                s_star, f_star = _candidate_minimum(a, gamma, box)
                mine_h = np.array(
                    [saturated_shrinkage(v, gamma, box) for v in a]
                )
                mine_j = np.array(
                    [shrinkage_objective(v, gamma, box) for v in a]
                )
                np.testing.assert_allclose(mine_h, s_star, atol=1e-10)
                np.testing.assert_allclose(mine_j, f_star, atol=1e-12)

    def test_continuity_at_region_boundaries(self):
        gamma = 0.37
        box = BoxBounds(-0.8, 1.3)
        eps = 1e-9
        for boundary in (box.lower - gamma, -gamma, gamma, box.upper + gamma):
            h_mid = saturated_shrinkage(boundary, gamma, box)
            j_mid = shrinkage_objective(boundary, gamma, box)
            for side in (-eps, eps):
                assert saturated_shrinkage(boundary + side, gamma, box) == (
                    pytest.approx(h_mid, abs=5e-9)
                )
                assert shrinkage_objective(boundary + side, gamma, box) == (
                    pytest.approx(j_mid, abs=5e-9)
                )

    def test_nonexpansive_and_monotone(self):
        rng = np.random.default_rng(2)
        box = BoxBounds(-0.5, 1.5)
        gamma = 0.4
        a = np.sort(rng.normal(size=500) * 3.0)
        h = np.array([saturated_shrinkage(v, gamma, box) for v in a])
        assert np.all(np.diff(h) >= -1e-15)
        assert np.all(np.abs(np.diff(h)) <= np.diff(a) + 1e-15)

    def test_objective_equals_plugged_in_minimizer(self):
        rng = np.random.default_rng(3)
        box = BoxBounds(-2.0, 0.5)
        for _ in range(500):
            a = rng.normal() * 3.0
            gamma = rng.uniform(0.0, 1.5)
            h = saturated_shrinkage(a, gamma, box)
            assert shrinkage_objective(a, gamma, box) == pytest.approx(
                _objective(h, a, gamma), abs=1e-12
            )


class TestGaussianPrimitives:
    def test_q_against_quadrature(self):
        for x in (-2.0, -0.3, 0.0, 1.0, 2.5):
            target, _ = integrate.quad(lambda z: normal_pdf(z), x, np.inf)
            assert q_function(x) == pytest.approx(target, rel=1e-10)

    def test_q_symmetry_and_shape(self):
        x = np.linspace(-3, 3, 11)
        np.testing.assert_allclose(q_function(x) + q_function(-x), 1.0, atol=1e-14)
        assert q_function(x).shape == x.shape

    def test_truncated_moments_against_quadrature(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            t1, t2 = np.sort(rng.normal(size=2) * 2.0)
            moments = truncated_moments(t1, t2)
            for p, value in enumerate((moments.m0, moments.m1, moments.m2)):
                target, _ = integrate.quad(
                    lambda z: z**p * normal_pdf(z), t1, t2
                )
                assert value == pytest.approx(target, abs=1e-12)

    def test_truncated_moments_full_line(self):
        moments = truncated_moments(-math.inf, math.inf)
        assert moments.m0 == pytest.approx(1.0, abs=1e-15)
        assert moments.m1 == pytest.approx(0.0, abs=1e-15)
        assert moments.m2 == pytest.approx(1.0, abs=1e-15)

    def test_truncated_moments_rejects_bad_interval(self):
        with pytest.raises(ValueError):
            truncated_moments(1.0, 0.0)
        with pytest.raises(ValueError):
            truncated_moments(math.nan, 0.0)
