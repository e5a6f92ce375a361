import math
from itertools import combinations

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soidslab.prior import (
    RelaxedPrior,
    SubsetPrior,
    relaxed_log_density,
    relaxed_log_density_subgradient,
    sample_l1_ball,
    sample_subset_prior,
    subset_log_mass,
)


class TestSubsetPrior:
    def test_two_singletons(self):
        p = SubsetPrior(2, 1)
        assert math.exp(subset_log_mass(p, {0})) == pytest.approx(0.5, abs=1e-15)
        assert math.exp(subset_log_mass(p, {1})) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("d,s", [(4, 2), (6, 3), (5, 5), (9, 1)])
    def test_normalized(self, d, s):
        p = SubsetPrior(d, s)
        total = sum(math.exp(subset_log_mass(p, S)) for S in p.supports())
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_complexity_bound(self):
        p = SubsetPrior(10, 3)
        for S in combinations(range(10), 3):
            assert -subset_log_mass(p, S) <= 3 * math.log(20 * math.e / 3)

    def test_rejects_empty_and_large(self):
        p = SubsetPrior(4, 2)
        with pytest.raises(ValueError):
            subset_log_mass(p, set())
        with pytest.raises(ValueError):
            subset_log_mass(p, {0, 1, 2})

    def test_samples_in_sparse_ball(self):
        p = SubsetPrior(8, 3)
        rng = np.random.default_rng(0)
        for _ in range(500):
            th = sample_subset_prior(p, rng)
            assert np.abs(th).sum() <= 1.0 and np.count_nonzero(th) <= 3

    def test_singleton_frequency(self):
        p = SubsetPrior(2, 1)
        rng = np.random.default_rng(1)
        n = 10_000
        hits = sum(sample_subset_prior(p, rng)[0] != 0 for _ in range(n))
        se = math.sqrt(0.25 / n)
        assert abs(hits / n - 0.5) <= 3 * se

    def test_support_size_frequencies(self):
        d, s, n = 6, 3, 6000
        p = SubsetPrior(d, s)
        rng = np.random.default_rng(2)
        sizes = np.array([np.count_nonzero(sample_subset_prior(p, rng)) for _ in range(n)])
        # exact size law: sum of Pi(S) over |S| = k
        exact = np.array([sum(math.exp(subset_log_mass(p, S)) for S in combinations(range(d), k))
                          for k in range(1, s + 1)])
        for k in range(1, s + 1):
            freq = np.mean(sizes == k)
            assert abs(freq - exact[k - 1]) <= 3 * math.sqrt(exact[k - 1] * (1 - exact[k - 1]) / n)

    def test_l1_ball_uniform_radius_law(self):
        # uniform in the k-dim l1 ball: P(||x||_1 <= r) = r^k
        rng = np.random.default_rng(3)
        k, n = 3, 20_000
        norms = np.array([np.abs(sample_l1_ball(k, rng)).sum() for _ in range(n)])
        for r in (0.3, 0.6, 0.9):
            assert abs(np.mean(norms <= r) - r**k) <= 3 * math.sqrt(r**k * (1 - r**k) / n)


class TestRelaxedPrior:
    def test_benchmark_hyperparameters_are_defaults(self):
        p = RelaxedPrior()
        assert (p.rho1, p.rho0, p.beta) == (10.0, 0.1, 0.1)

    def test_value_at_zero(self):
        mpmath.mp.dps = 40
        expected = mpmath.log(mpmath.mpf("0.1") / mpmath.sqrt(2 * mpmath.pi * 10) + mpmath.mpf("0.9") / mpmath.mpf("0.2"))
        assert relaxed_log_density(RelaxedPrior(), [0.0]) == pytest.approx(float(expected), abs=1e-14)

    def test_value_off_zero(self):
        mpmath.mp.dps = 40
        x = mpmath.mpf("0.37")
        slab = mpmath.mpf("0.1") * mpmath.exp(-x**2 / 20) / mpmath.sqrt(20 * mpmath.pi)
        spike = mpmath.mpf("0.9") * mpmath.exp(-x / mpmath.mpf("0.1")) / mpmath.mpf("0.2")
        assert relaxed_log_density(RelaxedPrior(), [0.37]) == pytest.approx(float(mpmath.log(slab + spike)), abs=1e-13)

    def test_integrates_to_one(self):
        from scipy.integrate import quad
        p = RelaxedPrior()
        total = sum(quad(lambda x: math.exp(relaxed_log_density(p, [x])), a, b, limit=200)[0]
                    for a, b in ((-60, -1), (-1, 0), (0, 1), (1, 60)))
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_coordinate_variance(self):
        from scipy.integrate import quad
        p = RelaxedPrior()
        var = sum(quad(lambda x: x * x * math.exp(relaxed_log_density(p, [x])), a, b, limit=200)[0]
                  for a, b in ((-80, -1), (-1, 0), (0, 1), (1, 80)))
        assert p.coordinate_variance == pytest.approx(var, rel=1e-8)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            relaxed_log_density(RelaxedPrior(), [0.0, np.nan])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-50, 50), min_size=1, max_size=6))
    def test_even(self, xs):
        x = np.array(xs)
        p = RelaxedPrior()
        assert relaxed_log_density(p, x) == pytest.approx(relaxed_log_density(p, -x), abs=1e-12)
        np.testing.assert_allclose(relaxed_log_density_subgradient(p, -x), -relaxed_log_density_subgradient(p, x))

    def test_subgradient_zero_at_origin(self):
        np.testing.assert_array_equal(relaxed_log_density_subgradient(RelaxedPrior(), np.zeros(4)), 0.0)

    def test_subgradient_matches_finite_differences(self):
        p = RelaxedPrior()
        rng = np.random.default_rng(4)
        pts = rng.uniform(0.01, 5.0, 100) * rng.choice((-1, 1), 100)
        h = 1e-6
        for x in pts:
            fd = (relaxed_log_density(p, [x + h]) - relaxed_log_density(p, [x - h])) / (2 * h)
            assert relaxed_log_density_subgradient(p, np.array([x]))[0] == pytest.approx(fd, abs=1e-4)

    @pytest.mark.parametrize("kw", [{"rho1": 0}, {"rho0": -1}, {"beta": 0}, {"beta": 1}])
    def test_rejects_bad_params(self, kw):
        with pytest.raises(ValueError):
            RelaxedPrior(**kw)
