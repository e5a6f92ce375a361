"""Action distributions: the information-ratio minimizer, Feel-Good Thompson
sampling, the exploratory design and mixtures of these."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .posterior import ParameterSamples
from .surrogate import DegenerateRatioError, SurrogateStats, info_ratio

_SUM_TOL = 1e-10


@dataclass(frozen=True)
class Policy:
    probs: np.ndarray
    degenerate: bool = False

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        if p.size == 0 or np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("policy probabilities must be finite and nonnegative")
        if abs(p.sum() - 1.0) > _SUM_TOL:
            raise ValueError(f"policy probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probs", p)

    @property
    def K(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def dirac(cls, K: int, index: int, **kwargs) -> "Policy":
        p = np.zeros(K)
        p[index] = 1.0
        return cls(p, **kwargs)

    @classmethod
    def uniform(cls, K: int) -> "Policy":
        return cls(np.full(K, 1.0 / K))


@dataclass(frozen=True)
class ExploratoryDesign:
    mu: Policy
    c_min: float


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    tau = css[rho] / (rho + 1.0)
    return np.maximum(v - tau, 0.0)


def _pair_scan(gap: np.ndarray, info: np.ndarray):
    """Minimize (gap . pi)^2 / (info . pi) over distributions with support of
    size at most two. Returns (value, j, k, q) with mass 1-q on j and q on k."""
    K = gap.size
    with np.errstate(divide="ignore", invalid="ignore"):
        single = np.where(info > 0, gap**2 / info, np.inf)
    single = np.where(gap == 0, 0.0, single)
    best_single = int(np.argmin(single))
    best = (float(single[best_single]), best_single, best_single, 0.0)
    if K == 1 or best[0] == 0.0:
        return best

    j, k = np.triu_indices(K, k=1)
    A, G = gap[j], info[j]
    dA, dG = gap[k] - A, info[k] - G
    denom = dA * dG
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(denom != 0, (dG * A - 2.0 * dA * G) / denom, np.nan)
        inside = (q > 0) & (q < 1)
        num = A + q * dA
        den = G + q * dG
        val = np.where(inside & (den > 0), num * num / den, np.inf)
    p = int(np.argmin(val))
    if val[p] < best[0]:
        best = (float(val[p]), int(j[p]), int(k[p]), float(q[p]))
    return best


def soids_policy(stats: SurrogateStats) -> Policy:
    """Distribution minimizing the sample 2-information ratio.

    The minimizer is supported on at most two actions; every pair is solved in
    closed form. Ties go to the lowest action (then pair) index. If no action
    carries information the Dirac on the smallest estimated gap is returned
    with ``degenerate=True``.
    """
    gap = np.asarray(stats.per_action_gap, dtype=float)
    info = np.asarray(stats.per_action_info, dtype=float)
    K = gap.size
    if not np.any(info > 0):
        return Policy.dirac(K, int(np.argmin(gap)), degenerate=True)
    _, j, k, q = _pair_scan(gap, info)
    probs = np.zeros(K)
    probs[j] += 1.0 - q
    probs[k] += q
    return Policy(probs)


def optimal_actions(samples, actions) -> np.ndarray:
    """Index of a*(theta) per sample: among maximizers, the one with fewest
    nonzero coordinates, then the lowest index."""
    S = samples.samples if isinstance(samples, ParameterSamples) else np.atleast_2d(samples)
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    R = S @ A.T
    top = R.max(axis=1, keepdims=True)
    tied = R >= top - 1e-12 * np.maximum(1.0, np.abs(top))
    K = A.shape[0]
    key = np.count_nonzero(A, axis=1) * K + np.arange(K)
    return np.argmin(np.where(tied, key[None, :], np.iinfo(np.int64).max), axis=1)


def fgts_policy(samples, actions) -> Policy:
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    idx = optimal_actions(samples, A)
    counts = np.bincount(idx, minlength=A.shape[0]).astype(float)
    return Policy(counts / counts.sum())


def sparse_optimal_screen(samples, actions, s: int) -> bool:
    """True when every sample has an optimal action with at most s nonzeros."""
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    idx = optimal_actions(samples, A)
    return bool(np.all(np.count_nonzero(A[idx], axis=1) <= s))


def exploratory_design(actions, iters: int = 500, step: float = 0.05) -> ExploratoryDesign:
    """Approximately maximize the smallest eigenvalue of sum_k pi_k a_k a_k^T.

    Projected supergradient ascent from the uniform design. The supergradient
    coordinate k is (v . a_k)^2 for a unit bottom eigenvector v; it is
    normalized to unit length and the step is ``step / sqrt(i)``. The best
    iterate is returned. c_min is 0 when the actions do not span R^d.
    """
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    K, d = A.shape
    pi = np.full(K, 1.0 / K)
    if np.linalg.matrix_rank(A) < d:
        return ExploratoryDesign(Policy(pi), 0.0)
    best_pi, best_val = pi, -np.inf
    for i in range(1, iters + 2):
        w, U = np.linalg.eigh(A.T @ (pi[:, None] * A))
        if w[0] > best_val:
            best_pi, best_val = pi, float(w[0])
        if i > iters:
            break
        g = (A @ U[:, 0]) ** 2
        norm = np.linalg.norm(g)
        if norm == 0.0:
            break
        pi = project_simplex(pi + step / np.sqrt(i) * g / norm)
    best_pi = best_pi / best_pi.sum()
    c_min = float(np.linalg.eigvalsh(A.T @ (best_pi[:, None] * A))[0])
    return ExploratoryDesign(Policy(best_pi), max(c_min, 0.0))


def mixture_policy(base: Policy, mu: Policy, gamma_mix: float) -> Policy:
    if not 0.0 <= gamma_mix <= 1.0:
        raise ValueError("mixture weight must lie in [0, 1]")
    if base.K != mu.K:
        raise ValueError("policies are over different action sets")
    p = (1.0 - gamma_mix) * base.probs + gamma_mix * mu.probs
    return Policy(p / p.sum())


def min_mixture_ratio(stats: SurrogateStats, base: Policy, mu: Policy, gamma: float = 3.0, n_grid: int = 101) -> float:
    """Smallest gamma-information ratio of (1-w) base + w mu over an even grid
    of w in [0, 1]; mixtures with zero information are skipped."""
    best = np.inf
    for w in np.linspace(0.0, 1.0, n_grid):
        try:
            best = min(best, info_ratio(stats, mixture_policy(base, mu, w), gamma))
        except DegenerateRatioError:
            continue
    return float(best)


def sample_action(policy, rng: np.random.Generator) -> int:
    p = np.asarray(getattr(policy, "probs", policy), dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > _SUM_TOL:
        raise ValueError("policy is not a probability vector")
    cdf = np.cumsum(p)
    u = rng.random() * cdf[-1]
    return int(min(np.searchsorted(cdf, u, side="right"), p.size - 1))
