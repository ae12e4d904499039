"""Gaussian averages of the shrinkage objective against sampling oracles."""

import math

import numpy as np
import pytest

from boxlasso.core import BoxBounds, UNBOUNDED_BOX
from boxlasso.expectations import expected_J
from boxlasso.priors import Prior


def _j_vectorized(a, gamma, lo, hi):
    """Independent vectorized evaluation of the box prox objective."""
    sat_hi = a >= hi + gamma
    shrink_pos = (a > gamma) & ~sat_hi
    dead = np.abs(a) <= gamma
    sat_lo = a <= lo - gamma
    shrink_neg = (a < -gamma) & ~sat_lo
    out = np.empty_like(a)
    out[sat_hi] = 0.5 * (hi - a[sat_hi]) ** 2 + gamma * hi
    out[shrink_pos] = gamma * a[shrink_pos] - 0.5 * gamma**2
    out[dead] = 0.5 * a[dead] ** 2
    out[shrink_neg] = -gamma * a[shrink_neg] - 0.5 * gamma**2
    out[sat_lo] = 0.5 * (lo - a[sat_lo]) ** 2 - gamma * lo
    return out


BERNOULLI = Prior.sparse_bernoulli(0.2, 1.0)
GAUSSIAN = Prior.sparse_gaussian(0.15, 1.3)


class TestDegenerateLimits:
    @pytest.mark.parametrize("prior", [BERNOULLI, GAUSSIAN])
    def test_pinned_box_gives_pure_quadratic(self, prior):
        # box [0, 0] forces s = 0, so J(a) = a^2 / 2 for every a
        c1 = 0.7
        target = 0.5 * (prior.second_moment + c1**2)
        value = expected_J(c1, 0.3, prior, BoxBounds(0.0, 0.0))
        assert value == pytest.approx(target, abs=1e-12)

    @pytest.mark.parametrize("prior", [BERNOULLI, GAUSSIAN])
    def test_huge_threshold_zeroes_the_minimizer(self, prior):
        c1 = 0.9
        target = 0.5 * (prior.second_moment + c1**2)
        value = expected_J(c1, 1e9, prior, BoxBounds(-1.0, 1.0))
        assert value == pytest.approx(target, rel=1e-9)

    def test_zero_threshold_unbounded_box_is_free(self):
        # gamma = 0 with no box: the minimizer matches a exactly, J = 0
        value = expected_J(0.8, 0.0, BERNOULLI, UNBOUNDED_BOX)
        assert value == pytest.approx(0.0, abs=1e-15)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            expected_J(0.0, 0.1, BERNOULLI, UNBOUNDED_BOX)
        with pytest.raises(ValueError):
            expected_J(1.0, -0.1, BERNOULLI, UNBOUNDED_BOX)
        with pytest.raises(ValueError):
            expected_J(math.nan, 0.1, BERNOULLI, UNBOUNDED_BOX)


class TestSamplingOracle:
    @pytest.mark.parametrize("prior", [BERNOULLI, GAUSSIAN])
    def test_matches_monte_carlo(self, prior):
        rng = np.random.default_rng(11)
        samples = 1_000_000
        for _ in range(10):
            c1 = 10.0 ** rng.uniform(-1.0, 0.7)
            c2 = 10.0 ** rng.uniform(-2.0, 0.7)
            kind = rng.integers(3)
            if kind == 0:
                box = UNBOUNDED_BOX
            elif kind == 1:
                box = BoxBounds(0.0, rng.uniform(0.5, 2.0))
            else:
                box = BoxBounds(-rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0))
            s0 = prior.sample(samples, rng)
            a = s0 + c1 * rng.standard_normal(samples)
            values = _j_vectorized(a, c2, box.lower, box.upper)
            estimate = values.mean()
            se = values.std(ddof=1) / math.sqrt(samples)
            exact = expected_J(c1, c2, prior, box)
            assert abs(exact - estimate) <= 4.0 * se + 1e-12
