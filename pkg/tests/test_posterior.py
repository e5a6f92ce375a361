import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soidslab.env import History
from soidslab.posterior import (
    OptimisticTarget,
    ParameterSamples,
    SamplerConfig,
    SamplerInitError,
    grid_posterior,
    mcmc_sample,
    posterior_mean,
)
from soidslab.prior import RelaxedPrior, relaxed_log_density


def history_from(pairs, K):
    h = History(K)
    for k, y in pairs:
        h.append(k, y)
    return h


class TestGridPosterior:
    def test_empty_history_returns_prior(self):
        post = grid_posterior([[0.0], [1.0], [2.0]], History(1), [[1.0]], eta=1.0, lambda_t=3.0)
        np.testing.assert_allclose(post.weights, [1 / 3] * 3, atol=1e-15)

    def test_reduces_to_bayes(self):
        grid = np.array([[-1.0, 0.0], [0.0, 0.5], [1.0, 1.0]])
        A = np.array([[1.0, 0.0], [0.0, 1.0]])
        h = history_from([(0, 0.7), (1, 0.2), (0, 1.1)], 2)
        prior = np.array([0.2, 0.5, 0.3])
        post = grid_posterior(grid, h, A, eta=1.0, lambda_t=0.0, prior_log_mass=np.log(prior))
        like = np.array([
            math.prod(math.exp(-0.5 * (y - g @ A[k]) ** 2) for k, y in [(0, 0.7), (1, 0.2), (0, 1.1)])
            for g in grid
        ])
        bayes = prior * like / np.sum(prior * like)
        np.testing.assert_allclose(post.weights, bayes, rtol=1e-12)

    def test_three_point_direct_formula(self):
        # d = 1, actions {+1, -1}; one observation of action 0 with reward 0.5
        grid = np.array([[-1.0], [0.0], [1.0]])
        A = np.array([[1.0], [-1.0]])
        eta, lam = 0.5, 0.3
        h = history_from([(0, 0.5)], 2)
        post = grid_posterior(grid, h, A, eta=eta, lambda_t=lam)
        logs = []
        for th in (-1.0, 0.0, 1.0):
            gap = max(th, -th) - th
            logs.append(-eta / 2 * (0.5 - th) ** 2 + lam * gap)
        w = np.exp(logs) / np.sum(np.exp(logs))
        np.testing.assert_allclose(post.weights, w, rtol=1e-12)

    def test_optimism_monotone(self):
        # the mean of the cumulative gap is nondecreasing in lambda (exponential tilting)
        rng = np.random.default_rng(0)
        grid = rng.normal(size=(40, 3))
        A = rng.uniform(-1, 1, size=(6, 3))
        h = history_from([(int(k), float(rng.normal())) for k in rng.integers(0, 6, 8)], 6)
        idx = h.action_indices()
        gap_sum = np.sum(np.max(grid @ A.T, axis=1)[:, None] - grid @ A[idx].T, axis=1)
        prev = -np.inf
        for lam in (0.0, 0.1, 0.5, 1.0, 3.0):
            val = grid_posterior(grid, h, A, 0.5, lam).weights @ gap_sum
            assert val >= prev - 1e-12
            prev = val

    @pytest.mark.parametrize("kw", [{"eta": 0.0}, {"lambda_t": -1.0}])
    def test_rejects_bad_params(self, kw):
        args = {"eta": 1.0, "lambda_t": 0.0, **kw}
        with pytest.raises(ValueError):
            grid_posterior([[0.0]], History(1), [[1.0]], **args)


class TestOptimisticTarget:
    def test_matches_direct_formula(self):
        rng = np.random.default_rng(1)
        A = rng.uniform(-1, 1, (5, 3))
        pairs = [(int(k), float(rng.normal())) for k in rng.integers(0, 5, 12)]
        h = history_from(pairs, 5)
        p = RelaxedPrior()
        tgt = OptimisticTarget(p, h, A, eta=0.7, lambda_t=0.4)
        for _ in range(10):
            th = rng.normal(size=3)
            direct = relaxed_log_density(p, th)
            best = np.max(A @ th)
            for k, y in pairs:
                direct += -0.35 * (y - A[k] @ th) ** 2 + 0.4 * (best - A[k] @ th)
            lp, _ = tgt(th)
            assert lp == pytest.approx(direct, abs=1e-9)

    def test_gradient_finite_difference(self):
        rng = np.random.default_rng(2)
        A = rng.uniform(-1, 1, (5, 3))
        h = history_from([(int(k), float(rng.normal())) for k in rng.integers(0, 5, 12)], 5)
        tgt = OptimisticTarget(RelaxedPrior(), h, A, eta=0.5, lambda_t=0.2)
        th = np.array([0.8, -1.3, 2.1])
        _, g = tgt(th)
        eps = 1e-6
        for i in range(3):
            e = np.zeros(3)
            e[i] = eps
            fd = (tgt(th + e)[0] - tgt(th - e)[0]) / (2 * eps)
            assert g[i] == pytest.approx(fd, abs=1e-5)


class TestMCMC:
    def test_prior_variance_recovered(self):
        p = RelaxedPrior()
        cfg = SamplerConfig(M=10_000, burn_in=1000, thin=5)
        # coordinates are independent under the prior; pooling 8 of them tames the heavy slab tail
        s = mcmc_sample(p, History(8), np.eye(8), 0.5, 0.0, cfg, np.random.default_rng(3))
        assert np.mean(s.samples**2) == pytest.approx(p.coordinate_variance, rel=0.05)

    def test_matches_quadrature_posterior_in_one_dimension(self):
        # 1-d optimistic posterior with the relaxed prior, integrated on a fine grid
        p = RelaxedPrior()
        A = np.array([[1.0], [-0.5]])
        h = history_from([(0, 0.4), (1, 0.3), (0, -0.2), (1, 0.1)], 2)
        eta, lam = 0.5, 0.5
        xs = np.linspace(-15, 15, 300_001)
        tgt = OptimisticTarget(p, h, A, eta, lam)
        logd = np.array([tgt(np.array([x]))[0] for x in xs[::100]])
        xs = xs[::100]
        w = np.exp(logd - logd.max())
        w /= w.sum()
        mean_q = float(w @ xs)
        sd_q = math.sqrt(float(w @ (xs - mean_q) ** 2))
        cfg = SamplerConfig(M=8000, burn_in=1000, thin=5)
        s = mcmc_sample(p, h, A, eta, lam, cfg, np.random.default_rng(4))
        assert abs(s.samples.mean() - mean_q) < 0.1 * sd_q
        assert s.samples.std() == pytest.approx(sd_q, rel=0.1)

    def test_acceptance_tuned(self):
        rng = np.random.default_rng(5)
        A = rng.uniform(-1, 1, (30, 10))
        h = history_from([(int(k), float(rng.normal())) for k in rng.integers(0, 30, 50)], 30)
        s = mcmc_sample(RelaxedPrior(), h, A, 0.5, 0.1, SamplerConfig(M=200), rng)
        assert 0.2 <= s.acceptance_rate <= 0.8
        assert s.samples.shape == (200, 10)
        assert np.all(np.isfinite(s.samples))

    def test_deterministic_given_rng(self):
        A = np.eye(3)
        h = history_from([(0, 1.0), (2, -0.5)], 3)
        a = mcmc_sample(RelaxedPrior(), h, A, 0.5, 0.2, SamplerConfig(M=20), np.random.default_rng(9))
        b = mcmc_sample(RelaxedPrior(), h, A, 0.5, 0.2, SamplerConfig(M=20), np.random.default_rng(9))
        np.testing.assert_array_equal(a.samples, b.samples)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_init_error(self):
        with pytest.raises(SamplerInitError):
            mcmc_sample(RelaxedPrior(), History(1), [[1.0]], 0.5, 0.0, SamplerConfig(M=2),
                        np.random.default_rng(0), init=[np.inf])

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SamplerConfig(M=0)


class TestPosteriorMean:
    def test_zero_samples_rejected(self):
        with pytest.raises(ValueError):
            posterior_mean(np.zeros((0, 3)))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 20), st.integers(1, 5), st.integers(0, 999))
    def test_is_coordinate_average(self, M, d, seed):
        S = np.random.default_rng(seed).normal(size=(M, d))
        np.testing.assert_allclose(posterior_mean(ParameterSamples(S)), [sum(S[:, j]) / M for j in range(d)],
                                   atol=1e-12)
