"""Sparsity priors.

``SubsetPrior`` is the exact subset-selection prior over the sparse l1 ball,
used by the grid posterior and the numerical checks. ``RelaxedPrior`` is the
Gaussian-slab / Laplace-spike relaxation the Langevin sampler targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SubsetPrior:
    d: int
    s: int

    def __post_init__(self):
        if not 1 <= self.s <= self.d:
            raise ValueError(f"need 1 <= s <= d, got d={self.d}, s={self.s}")

    @property
    def log_normalizer(self) -> float:
        return math.log(sum(2.0**-k for k in range(1, self.s + 1)))

    def size_probabilities(self) -> np.ndarray:
        """Probability that the drawn support has size k, for k = 1..s."""
        w = 2.0 ** -np.arange(1, self.s + 1)
        return w / w.sum()

    def supports(self):
        """All admissible supports, smallest first."""
        for k in range(1, self.s + 1):
            yield from combinations(range(self.d), k)


def subset_log_mass(prior: SubsetPrior, S) -> float:
    S = frozenset(int(j) for j in S)
    k = len(S)
    if k == 0:
        raise ValueError("the empty support has zero prior mass")
    if k > prior.s:
        raise ValueError(f"support of size {k} exceeds s={prior.s}")
    if min(S) < 0 or max(S) >= prior.d:
        raise ValueError("support indices out of range")
    return -k * math.log(2.0) - math.log(math.comb(prior.d, k)) - prior.log_normalizer


def sample_l1_ball(k: int, rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
    """Uniform draw from the k-dimensional l1 ball of the given radius."""
    e = rng.exponential(size=k)
    signs = rng.choice((-1.0, 1.0), size=k)
    direction = signs * e / e.sum()
    return radius * rng.random() ** (1.0 / k) * direction


def sample_subset_prior(prior: SubsetPrior, rng: np.random.Generator) -> np.ndarray:
    k = 1 + int(rng.choice(prior.s, p=prior.size_probabilities()))
    support = np.sort(rng.choice(prior.d, size=k, replace=False))
    theta = np.zeros(prior.d)
    theta[support] = sample_l1_ball(k, rng)
    return theta


def l1_ball_log_volume(k: int, radius: float = 1.0) -> float:
    return k * math.log(2.0 * radius) - math.lgamma(k + 1)


def subset_prior_log_density(prior: SubsetPrior, theta) -> float:
    """Log density of the subset prior at ``theta``, with respect to Lebesgue
    measure on the coordinate subspace spanned by ``supp(theta)``.

    Components supported on smaller subspaces are null sets there, so only the
    support of ``theta`` itself contributes.
    """
    theta = np.asarray(theta, dtype=float)
    support = np.flatnonzero(theta)
    if support.size == 0 or support.size > prior.s or np.abs(theta).sum() > 1.0:
        return -math.inf
    return subset_log_mass(prior, support) - l1_ball_log_volume(support.size)


@dataclass(frozen=True)
class RelaxedPrior:
    """Coordinatewise mixture ``beta * N(0, rho1) + (1 - beta) * Laplace(0, rho0)``.

    ``rho1`` is the slab variance and ``rho0`` the spike scale.
    """

    rho1: float = 10.0
    rho0: float = 0.1
    beta: float = 0.1

    def __post_init__(self):
        if self.rho1 <= 0 or self.rho0 <= 0:
            raise ValueError("rho1 and rho0 must be positive")
        if not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")

    @property
    def coordinate_variance(self) -> float:
        return self.beta * self.rho1 + (1 - self.beta) * 2 * self.rho0**2

    def _log_components(self, theta: np.ndarray):
        log_slab = math.log(self.beta) - 0.5 * (_LOG_2PI + math.log(self.rho1)) - theta**2 / (2 * self.rho1)
        log_spike = math.log1p(-self.beta) - math.log(2 * self.rho0) - np.abs(theta) / self.rho0
        return log_slab, log_spike


def relaxed_log_density(prior: RelaxedPrior, theta) -> float:
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta must be finite")
    log_slab, log_spike = prior._log_components(theta)
    return float(np.sum(np.logaddexp(log_slab, log_spike)))


def relaxed_log_density_subgradient(prior: RelaxedPrior, theta) -> np.ndarray:
    """Coordinatewise derivative of ``relaxed_log_density``; 0 where theta_j = 0."""
    theta = np.asarray(theta, dtype=float)
    log_slab, log_spike = prior._log_components(theta)
    w_slab = np.exp(log_slab - np.logaddexp(log_slab, log_spike))
    return -w_slab * theta / prior.rho1 - (1.0 - w_slab) * np.sign(theta) / prior.rho0
