"""The optimistic posterior.

Two interchangeable backends: exact log-weights over a finite parameter grid,
and Metropolis-adjusted Langevin sampling under the relaxed spike-and-slab
prior. Both target

    prior(theta) * exp(-eta/2 * sum_s (Y_s - <theta, A_s>)^2
                       + lambda_t * sum_s gap(A_s, theta)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.special import logsumexp

from .env import History, as_history
from .prior import RelaxedPrior


class SamplerInitError(RuntimeError):
    """The sampler target is not finite at the initial state."""


@dataclass(frozen=True)
class GridPosterior:
    grid: np.ndarray
    log_weights: np.ndarray
    eta: float
    lambda_current: float

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def mean(self) -> np.ndarray:
        return self.weights @ self.grid


@dataclass(frozen=True)
class SamplerConfig:
    M: int = 100
    burn_in: int = 500
    thin: int = 10
    step_size: float = 0.1
    target_acceptance: float = 0.5
    augment: bool = True

    def __post_init__(self):
        if self.M < 2:
            raise ValueError("M must be at least 2")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if self.thin < 1:
            raise ValueError("thin must be at least 1")
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if not 0 < self.target_acceptance < 1:
            raise ValueError("target_acceptance must lie in (0, 1)")

    @property
    def n_steps(self) -> int:
        return self.burn_in + self.M * self.thin


@dataclass(frozen=True)
class ParameterSamples:
    samples: np.ndarray
    mean: np.ndarray = None
    acceptance_rate: float | None = None
    step_size: float | None = None
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        object.__setattr__(self, "samples", samples)
        if self.mean is None:
            object.__setattr__(self, "mean", samples.mean(axis=0))
        else:
            object.__setattr__(self, "mean", np.asarray(self.mean, dtype=float))

    @property
    def M(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]


def posterior_mean(samples) -> np.ndarray:
    arr = samples.samples if isinstance(samples, ParameterSamples) else np.atleast_2d(samples)
    if arr.shape[0] < 1:
        raise ValueError("need at least one sample")
    return arr.mean(axis=0)


def grid_posterior(grid, history, actions, eta: float, lambda_t: float, prior_log_mass=None) -> GridPosterior:
    """Exact optimistic posterior over a finite candidate set.

    The prior over the grid is uniform unless ``prior_log_mass`` (one log mass
    per grid point, unnormalized) is supplied.
    """
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    actions = np.atleast_2d(np.asarray(actions, dtype=float))
    if grid.shape[0] == 0:
        raise ValueError("grid must be nonempty")
    if eta <= 0:
        raise ValueError("eta must be positive")
    if lambda_t < 0:
        raise ValueError("lambda_t must be nonnegative")
    if grid.shape[1] != actions.shape[1]:
        raise ValueError("grid and actions have different dimensions")
    hist = as_history(history, actions.shape[0])

    if prior_log_mass is None:
        log_w = np.zeros(grid.shape[0])
    else:
        log_w = np.array(prior_log_mass, dtype=float).reshape(-1)
        if log_w.shape[0] != grid.shape[0]:
            raise ValueError("prior_log_mass must have one entry per grid point")

    if len(hist):
        idx = hist.action_indices()
        y = hist.rewards()
        means = grid @ actions[idx].T  # (N, n)
        log_lik = -0.5 * np.sum((y[None, :] - means) ** 2, axis=1)
        best = np.max(grid @ actions.T, axis=1)
        gap_sum = np.sum(best[:, None] - means, axis=1)
        log_w = log_w + eta * log_lik + lambda_t * gap_sum

    log_w = log_w - logsumexp(log_w)
    return GridPosterior(grid=grid, log_weights=log_w, eta=float(eta), lambda_current=float(lambda_t))


class OptimisticTarget:
    """Log density (up to a constant) and a subgradient of the optimistic
    posterior under the relaxed prior.

    Uses per-action play counts: sum_s gap(A_s, theta) equals
    n * max_k <theta, a_k> - <theta, sum_s A_s>.
    """

    def __init__(self, prior: RelaxedPrior, history, actions, eta: float, lambda_t: float):
        if eta <= 0:
            raise ValueError("eta must be positive")
        if lambda_t < 0:
            raise ValueError("lambda_t must be nonnegative")
        self.actions = np.atleast_2d(np.asarray(actions, dtype=float))
        hist: History = as_history(history, self.actions.shape[0])
        self.prior = prior
        self.eta = float(eta)
        self.lambda_t = float(lambda_t)
        A = self.actions
        self.n = float(len(hist))
        self.gram = A.T @ (hist.counts[:, None] * A)
        self.moment = A.T @ hist.reward_sums
        self.action_sum = A.T @ hist.counts
        self.reward_sq = hist.reward_sq_sum
        # prior constants
        self._c_slab = math.log(prior.beta) - 0.5 * math.log(2 * math.pi * prior.rho1)
        self._c_spike = math.log1p(-prior.beta) - math.log(2 * prior.rho0)

    def __call__(self, theta: np.ndarray):
        p = self.prior
        log_slab = self._c_slab - theta * theta / (2 * p.rho1)
        log_spike = self._c_spike - np.abs(theta) / p.rho0
        log_mix = np.logaddexp(log_slab, log_spike)
        w_slab = np.exp(log_slab - log_mix)
        lp = log_mix.sum()
        grad = -w_slab * theta / p.rho1 - (1.0 - w_slab) * np.sign(theta) / p.rho0

        if self.n:
            g_theta = self.gram @ theta
            lp -= 0.5 * self.eta * (theta @ g_theta - 2.0 * self.moment @ theta + self.reward_sq)
            grad = grad - self.eta * (g_theta - self.moment)
            if self.lambda_t:
                rewards = self.actions @ theta
                k = int(np.argmax(rewards))
                lp += self.lambda_t * (self.n * rewards[k] - self.action_sum @ theta)
                grad = grad + self.lambda_t * (self.n * self.actions[k] - self.action_sum)
        return float(lp), grad


@njit(cache=True)
def _log_target(x, grad, slab, augment, A, gram, moment, action_sum, n, reward_sq, eta, lam,
                rho1, rho0, c_slab, c_spike):
    # augment=True: density of theta given the slab indicators (up to a constant);
    # augment=False: the marginal mixture prior.
    d = x.shape[0]
    lp = 0.0
    for j in range(d):
        v = x[j]
        sgn = 0.0
        if v > 0.0:
            sgn = 1.0
        elif v < 0.0:
            sgn = -1.0
        if augment:
            if slab[j]:
                lp -= v * v / (2.0 * rho1)
                grad[j] = -v / rho1
            else:
                lp -= abs(v) / rho0
                grad[j] = -sgn / rho0
        else:
            ls = c_slab - v * v / (2.0 * rho1)
            lk = c_spike - abs(v) / rho0
            m = max(ls, lk)
            lmix = m + math.log(math.exp(ls - m) + math.exp(lk - m))
            w = math.exp(ls - lmix)
            lp += lmix
            grad[j] = -w * v / rho1 - (1.0 - w) * sgn / rho0
    if n > 0.0:
        quad = 0.0
        lin = 0.0
        for j in range(d):
            gj = 0.0
            for i in range(d):
                gj += gram[j, i] * x[i]
            quad += x[j] * gj
            lin += moment[j] * x[j]
            grad[j] -= eta * (gj - moment[j])
        lp -= 0.5 * eta * (quad - 2.0 * lin + reward_sq)
        if lam != 0.0:
            K = A.shape[0]
            best = -np.inf
            kbest = 0
            for k in range(K):
                r = 0.0
                for j in range(d):
                    r += A[k, j] * x[j]
                if r > best:
                    best = r
                    kbest = k
            opt = n * best
            for j in range(d):
                opt -= action_sum[j] * x[j]
                grad[j] += lam * (n * A[kbest, j] - action_sum[j])
            lp += lam * opt
    return lp


@njit(cache=True)
def _mala_chain(x0, h0, burn_in, M, thin, target_acc, augment, noise, log_unif, gibbs_unif,
                A, gram, moment, action_sum, n, reward_sq, eta, lam, rho1, rho0, c_slab, c_spike):
    d = x0.shape[0]
    x = x0.copy()
    slab = np.zeros(d, dtype=np.bool_)
    g = np.empty(d)
    g_p = np.empty(d)
    prop = np.empty(d)
    scale = np.ones(d)
    out = np.empty((M, d))
    h = h0
    log_h = math.log(h0)
    kept = 0
    n_accept = 0
    if not augment:
        for j in range(d):
            scale[j] = 1.0
    lp = _log_target(x, g, slab, augment, A, gram, moment, action_sum, n, reward_sq, eta, lam,
                     rho1, rho0, c_slab, c_spike)
    n_total = burn_in + M * thin
    for i in range(n_total):
        if augment:
            # exact Gibbs step for the indicators, then per-coordinate scales
            for j in range(d):
                v = x[j]
                ls = c_slab - v * v / (2.0 * rho1)
                lk = c_spike - abs(v) / rho0
                slab[j] = gibbs_unif[i, j] * (1.0 + math.exp(lk - ls)) < 1.0
                pv = rho1 if slab[j] else 2.0 * rho0 * rho0
                scale[j] = 1.0 / math.sqrt(1.0 / pv + eta * gram[j, j])
            lp = _log_target(x, g, slab, augment, A, gram, moment, action_sum, n, reward_sq, eta, lam,
                             rho1, rho0, c_slab, c_spike)
        h2 = h * h
        fwd_sq = 0.0
        for j in range(d):
            prop[j] = x[j] + 0.5 * h2 * scale[j] * scale[j] * g[j] + h * scale[j] * noise[i, j]
            fwd_sq += noise[i, j] * noise[i, j]
        lp_p = _log_target(prop, g_p, slab, augment, A, gram, moment, action_sum, n, reward_sq, eta, lam,
                           rho1, rho0, c_slab, c_spike)
        bwd_sq = 0.0
        for j in range(d):
            r = (x[j] - prop[j] - 0.5 * h2 * scale[j] * scale[j] * g_p[j]) / (h * scale[j])
            bwd_sq += r * r
        log_alpha = lp_p - lp - 0.5 * (bwd_sq - fwd_sq)
        if not math.isfinite(log_alpha):
            log_alpha = -np.inf
        accept = log_unif[i] < log_alpha
        if accept:
            for j in range(d):
                x[j] = prop[j]
                g[j] = g_p[j]
            lp = lp_p
        if i < burn_in:
            alpha = math.exp(min(0.0, log_alpha))
            log_h += (alpha - target_acc) / math.sqrt(i + 10.0)
            h = math.exp(log_h)
        else:
            if accept:
                n_accept += 1
            if (i - burn_in + 1) % thin == 0:
                out[kept] = x
                kept += 1
    return out, x, h, n_accept


def mcmc_sample(
    prior: RelaxedPrior,
    history,
    actions,
    eta: float,
    lambda_t: float,
    cfg: SamplerConfig,
    rng: np.random.Generator,
    init=None,
    step_size: float | None = None,
) -> ParameterSamples:
    """Draw ``cfg.M`` approximate samples from the optimistic posterior.

    Each iteration is a Metropolis-adjusted Langevin step on theta. With
    ``cfg.augment`` the spike/slab indicators are refreshed first by an exact
    Gibbs step and the Langevin step uses per-coordinate scales from the active
    component and the Gram diagonal; the theta-marginal is unchanged. Without
    it the chain runs plain MALA on the marginal mixture prior.

    The step size starts at ``step_size`` (or ``cfg.step_size``), is tuned
    multiplicatively during burn-in toward ``cfg.target_acceptance`` and then
    frozen. All randomness is drawn up front from ``rng``.
    ``extras["last_state"]`` holds the final chain state for warm starts.
    """
    if cfg.M < 1:
        raise ValueError("zero samples requested")
    target = OptimisticTarget(prior, history, actions, eta, lambda_t)
    d = target.actions.shape[1]
    x0 = np.zeros(d) if init is None else np.array(init, dtype=float).reshape(d)
    lp0, g0 = target(x0)
    if not (math.isfinite(lp0) and np.all(np.isfinite(g0))):
        raise SamplerInitError("optimistic posterior is not finite at the initial state")

    h0 = float(step_size if step_size is not None else cfg.step_size)
    n_total = cfg.n_steps
    noise = rng.standard_normal((n_total, d))
    log_unif = np.log(rng.random(n_total))
    gibbs_unif = rng.random((n_total, d)) if cfg.augment else np.empty((0, d))
    out, x, h, n_accept = _mala_chain(
        x0, h0, cfg.burn_in, cfg.M, cfg.thin, cfg.target_acceptance, bool(cfg.augment),
        noise, log_unif, gibbs_unif,
        np.ascontiguousarray(target.actions), target.gram, target.moment, target.action_sum,
        target.n, target.reward_sq, target.eta, target.lambda_t,
        prior.rho1, prior.rho0, target._c_slab, target._c_spike,
    )
    return ParameterSamples(
        samples=out,
        acceptance_rate=n_accept / max(1, cfg.M * cfg.thin),
        step_size=float(h),
        extras={"last_state": x},
    )
