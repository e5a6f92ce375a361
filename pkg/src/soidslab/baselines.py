"""Comparison algorithms: LinUCB, LASSO explore-then-commit and the
online-to-confidence-set method with a sampled exponential-weights centre."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .env import History, Instance, RegretTrace, as_history, cumulative_regret, pull
from .policy import Policy, sample_action
from .posterior import ParameterSamples, SamplerConfig, mcmc_sample
from .prior import RelaxedPrior


@dataclass
class RidgeState:
    gram: np.ndarray
    moment: np.ndarray
    lambda_ridge: float = 1.0

    @classmethod
    def empty(cls, d: int, lambda_ridge: float = 1.0) -> "RidgeState":
        if lambda_ridge <= 0:
            raise ValueError("lambda_ridge must be positive")
        return cls(lambda_ridge * np.eye(d), np.zeros(d), lambda_ridge)

    @property
    def d(self) -> int:
        return self.moment.shape[0]

    def update(self, action, reward: float) -> None:
        a = np.asarray(action, dtype=float)
        self.gram += np.outer(a, a)
        self.moment += reward * a

    def factor(self):
        return cho_factor(self.gram, lower=True)

    def log_det_ratio(self, chol=None) -> float:
        """log(det(gram) / lambda_ridge^d)."""
        c, _ = chol if chol is not None else self.factor()
        return 2.0 * float(np.sum(np.log(np.diag(c)))) - self.d * math.log(self.lambda_ridge)


def _ellipsoid_norms(chol, actions: np.ndarray) -> np.ndarray:
    W = cho_solve(chol, actions.T)
    return np.sqrt(np.maximum(np.sum(actions.T * W, axis=0), 0.0))


def linucb_radius(state: RidgeState, delta: float, S: float, chol=None) -> float:
    return math.sqrt(state.lambda_ridge) * S + math.sqrt(2.0 * math.log(1.0 / delta) + state.log_det_ratio(chol))


def linucb_action(state: RidgeState, actions, delta: float = 0.01, S: float = 10.0) -> int:
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    chol = state.factor()
    theta_hat = cho_solve(chol, state.moment)
    beta = linucb_radius(state, delta, S, chol)
    return int(np.argmax(A @ theta_hat + beta * _ellipsoid_norms(chol, A)))


@dataclass(frozen=True)
class LassoModel:
    coef: np.ndarray
    reg: float
    converged: bool = True
    sweeps: int = 0


def lasso_objective(X, y, coef, reg: float) -> float:
    r = np.asarray(y, dtype=float) - np.asarray(X, dtype=float) @ coef
    return float(r @ r / (2 * len(r)) + reg * np.abs(coef).sum())


def lasso_fit(X, y, reg: float, tol: float = 1e-8, max_sweeps: int = 10_000) -> LassoModel:
    """Cyclic coordinate descent with soft thresholding, run on the covariance
    form Q = X^T X / n, c = X^T y / n."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1)
    n, d = X.shape
    if n < 1 or y.shape[0] != n:
        raise ValueError("X and y must have the same positive number of rows")
    if reg <= 0:
        raise ValueError("reg must be positive")
    Q = X.T @ X / n
    c = X.T @ y / n
    diag = np.diag(Q).copy()
    coef = np.zeros(d)
    Qcoef = np.zeros(d)
    for sweep in range(1, max_sweeps + 1):
        max_change = 0.0
        for j in range(d):
            if diag[j] == 0.0:
                continue
            old = coef[j]
            z = c[j] - Qcoef[j] + diag[j] * old
            new = math.copysign(max(abs(z) - reg, 0.0), z) / diag[j]
            if new != old:
                Qcoef += Q[:, j] * (new - old)
                coef[j] = new
                max_change = max(max_change, abs(new - old))
        if max_change < tol:
            return LassoModel(coef, reg, True, sweep)
    return LassoModel(coef, reg, False, max_sweeps)


def estc_reg(d: int, T1: int) -> float:
    return 4.0 * math.sqrt(math.log(d) / T1)


def estc_run(instance: Instance, T: int, T1: int, rng: np.random.Generator,
             reg: float | None = None, explore: Policy | None = None) -> RegretTrace:
    """Explore for T1 rounds (uniformly unless ``explore`` is given), fit the
    LASSO and commit to its greedy action.

    ``reg`` (default ``estc_reg``) weights the l1 penalty against the
    unhalved mean squared error (1/n)||y - X theta||^2, so ``lasso_fit`` is
    called with ``reg / 2``.
    """
    if not 1 <= T1 <= T:
        raise ValueError(f"need 1 <= T1 <= T, got T1={T1}, T={T}")
    explore = explore or Policy.uniform(instance.K)
    gaps = instance.gaps
    idx = np.empty(T1, dtype=int)
    y = np.empty(T1)
    for t in range(T1):
        idx[t] = sample_action(explore, rng)
        y[t] = pull(instance, idx[t], rng)
    reg = estc_reg(instance.d, T1) if reg is None else reg
    model = lasso_fit(instance.actions[idx], y, 0.5 * reg)
    commit = int(np.argmax(instance.actions @ model.coef))
    played = np.concatenate([idx, np.full(T - T1, commit, dtype=int)])
    for _ in range(T - T1):
        pull(instance, commit, rng)
    return cumulative_regret(gaps[played])


def run_linucb(instance: Instance, T: int, rng: np.random.Generator, delta: float = 0.01,
               S: float = 10.0, lambda_ridge: float = 1.0) -> RegretTrace:
    state = RidgeState.empty(instance.d, lambda_ridge)
    gaps = instance.gaps
    played = np.empty(T, dtype=int)
    for t in range(T):
        k = linucb_action(state, instance.actions, delta, S)
        state.update(instance.actions[k], pull(instance, k, rng))
        played[t] = k
    return cumulative_regret(gaps[played])


@dataclass(frozen=True)
class RadiusConfig:
    """Confidence radius schedule of the OTCS baseline.

    ``self_normalized``: sqrt(lam) S + sqrt(2 log(t^2/delta) + log(det G / lam^d)).
    ``sparse``: sqrt(2 (c s log(e d t / s) + log(1/delta))), a likelihood-ratio
    width whose complexity term is the log-loss regret of a sparse
    exponential-weights forecaster; no ridge-bias term, since the centre is
    not a ridge estimate. ``constant``: ``value`` every round.
    """

    kind: str = "sparse"
    delta: float = 0.01
    S: float = 10.0
    lambda_ridge: float = 1.0
    c: float = 1.0
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in ("self_normalized", "sparse", "constant"):
            raise ValueError(f"unknown radius kind {self.kind!r}")

    def radius(self, t: int, state: RidgeState, s: int, chol=None) -> float:
        if self.kind == "constant":
            return self.value
        t = max(t, 1)
        if self.kind == "self_normalized":
            return math.sqrt(self.lambda_ridge) * self.S + math.sqrt(
                2.0 * math.log(t * t / self.delta) + state.log_det_ratio(chol))
        d = state.d
        return math.sqrt(2.0 * (self.c * s * math.log(math.e * d * t / s) + math.log(1.0 / self.delta)))


def history_ridge(history: History, actions: np.ndarray, lambda_ridge: float) -> RidgeState:
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    gram = lambda_ridge * np.eye(A.shape[1]) + (A.T * history.counts) @ A
    return RidgeState(gram, A.T @ history.reward_sums, lambda_ridge)


def otcs_action(samples: ParameterSamples, history, actions, radius_cfg: RadiusConfig, s: int = 1) -> int:
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    hist = as_history(history, A.shape[0])
    state = history_ridge(hist, A, radius_cfg.lambda_ridge)
    chol = state.factor()
    centre = np.asarray(samples.mean, dtype=float)
    beta = radius_cfg.radius(len(hist) + 1, state, s, chol)
    return int(np.argmax(A @ centre + beta * _ellipsoid_norms(chol, A)))


@dataclass
class OTCSConfig:
    eta: float = 0.5
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    prior: RelaxedPrior = field(default_factory=RelaxedPrior)
    radius: RadiusConfig = field(default_factory=RadiusConfig)


def run_otcs(instance: Instance, T: int, cfg: OTCSConfig, rng: np.random.Generator) -> RegretTrace:
    """Exponential-weights posterior (no optimism), warm-started chain per round."""
    hist = History(instance.K)
    gaps = instance.gaps
    played = np.empty(T, dtype=int)
    init, step = None, None
    for t in range(T):
        samples = mcmc_sample(cfg.prior, hist, instance.actions, cfg.eta, 0.0, cfg.sampler, rng, init, step)
        init, step = samples.extras["last_state"], samples.step_size
        k = otcs_action(samples, hist, instance.actions, cfg.radius, instance.s)
        hist.append(k, pull(instance, k, rng))
        played[t] = k
    return cumulative_regret(gaps[played])
