"""Signal priors: parameters, moments, sampling, quadrature nodes."""

import numpy as np
import pytest

from boxlasso.priors import Prior, gauss_hermite_normal, sample_prior


class TestPriorConstruction:
    def test_bernoulli_fields(self):
        prior = Prior.sparse_bernoulli(0.2, 1.5)
        assert prior.discrete
        assert prior.second_moment == pytest.approx(0.2 * 1.5**2)
        assert prior.nonzero_second_moment == pytest.approx(1.5**2)
        assert prior.atoms() == [(0.0, 0.8), (1.5, 0.2)]

    def test_gaussian_fields(self):
        prior = Prior.sparse_gaussian(0.1, 2.0)
        assert not prior.discrete
        assert prior.second_moment == pytest.approx(0.2)
        assert prior.nonzero_second_moment == pytest.approx(2.0)
        with pytest.raises(ValueError):
            prior.atoms()

    def test_zero_prior(self):
        prior = Prior.point_mass_zero()
        assert prior.discrete
        assert prior.second_moment == 0.0
        assert prior.atoms() == [(0.0, 1.0)]

    def test_validation(self):
        with pytest.raises(ValueError):
            Prior.sparse_bernoulli(-0.1, 1.0)
        with pytest.raises(ValueError):
            Prior.sparse_bernoulli(1.0, 1.0)
        with pytest.raises(ValueError):
            Prior.sparse_bernoulli(0.2, 0.0)
        with pytest.raises(ValueError):
            Prior.sparse_gaussian(0.2, -1.0)


class TestSampling:
    def test_deterministic_given_seed(self):
        prior = Prior.sparse_bernoulli(0.3, 1.0)
        a = sample_prior(prior, 1000, rng_seed=42)
        b = sample_prior(prior, 1000, rng_seed=42)
        np.testing.assert_array_equal(a, b)
        c = sample_prior(prior, 1000, rng_seed=43)
        assert not np.array_equal(a, c)

    def test_bernoulli_concentration(self):
        prior = Prior.sparse_bernoulli(0.25, 2.0)
        rng = np.random.default_rng(7)
        draws = prior.sample(200_000, rng)
        frac = np.mean(draws != 0.0)
        # binomial standard error ~ 0.001
        assert frac == pytest.approx(0.25, abs=0.005)
        assert set(np.unique(draws)) <= {0.0, 2.0}

    def test_gaussian_moments(self):
        prior = Prior.sparse_gaussian(0.5, 1.44)
        rng = np.random.default_rng(8)
        draws = prior.sample(200_000, rng)
        assert np.mean(draws**2) == pytest.approx(prior.second_moment, rel=0.02)

    def test_sample_nonzero(self):
        prior = Prior.sparse_bernoulli(0.1, 3.0)
        rng = np.random.default_rng(9)
        values = prior.sample_nonzero(50, rng)
        assert np.all(values == 3.0)
        gaussian = Prior.sparse_gaussian(0.1, 4.0)
        values = gaussian.sample_nonzero(200_000, rng)
        assert np.var(values) == pytest.approx(4.0, rel=0.02)


class TestGaussHermite:
    def test_weights_normalized(self):
        nodes, weights = gauss_hermite_normal(64)
        assert weights.sum() == pytest.approx(1.0, abs=1e-12)
        assert nodes.shape == weights.shape == (64,)

    def test_integrates_standard_normal_moments(self):
        nodes, weights = gauss_hermite_normal(64)
        assert np.dot(weights, nodes) == pytest.approx(0.0, abs=1e-12)
        assert np.dot(weights, nodes**2) == pytest.approx(1.0, rel=1e-12)
        assert np.dot(weights, nodes**4) == pytest.approx(3.0, rel=1e-10)
