"""Brute-force oracles and numerical checks of the supporting inequalities.

Every checker is deterministic given its seed and returns a ``LemmaReport``.
Tolerances live in ``TOLERANCES``; the test-suite reads them from there.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .policy import (
    Policy,
    exploratory_design,
    fgts_policy,
    min_mixture_ratio,
    project_simplex,
    soids_policy,
    sparse_optimal_screen,
)
from .prior import (
    SubsetPrior,
    l1_ball_log_volume,
    sample_l1_ball,
    sample_subset_prior,
    subset_prior_log_density,
)
from .schedules import (
    ScheduleState,
    c_t,
    lambda_experimental,
    lambda_theorem2,
    lambda_theorem2_parts,
    lambda_theorem3,
    t_min_threshold,
)
from .surrogate import SurrogateStats, surrogate_info_gain, surrogate_stats, true_info_gain

# Allowed max_violation per check. Monte Carlo checks already subtract their
# 3-standard-error band, so their tolerance is 0.
TOLERANCES = {
    "gir_minimizer": 1e-2,
    "pair_scan": 1e-6,
    "amgm": 1e-12,
    "covering": 0.0,
    "sig_tig": 1e-12,
    "supermartingale": 0.0,
    "hoeffding": 0.0,
    "kl_prior": 0.0,
    "lipschitz": 1e-12,
    "schedule_bounds": 1e-12,
    "w_log": 0.0,
    "monotonicity": 1e-15,
    "implicit_rb": 1e-12,
    "ir2_fgts": 1e-6,
    "ir3_mixture": 0.05,
}

MAX_MESH_POINTS = 50_000


@dataclass
class LemmaReport:
    lemma: str
    instances: int
    max_violation: float
    tolerance: float
    passed: bool = field(init=False)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.max_violation = float(self.max_violation)
        self.passed = bool(self.max_violation <= self.tolerance)

    def to_dict(self) -> dict:
        return asdict(self)


def _report(name: str, instances: int, violation: float, **details) -> LemmaReport:
    return LemmaReport(name, instances, violation, TOLERANCES[name], details=details)


# ---------------------------------------------------------------- IR oracle

def ir_value(stats: SurrogateStats, probs: np.ndarray, gamma: float) -> float:
    r = float(probs @ stats.per_action_gap)
    g = float(probs @ stats.per_action_info)
    if g > 0:
        return r**gamma / g
    return 0.0 if r <= 0 else math.inf


def simplex_mesh(K: int, n: int) -> np.ndarray:
    """All points of the simplex with coordinates in {0, 1/n, ..., 1}."""
    if K == 1:
        return np.ones((1, 1))
    bars = np.array(list(combinations(range(n + K - 1), K - 1)), dtype=int)
    edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), n + K - 1)])
    return (np.diff(edges, axis=1) - 1) / n


def _mesh_divisions(K: int, mesh: float, cap: int) -> int:
    n = max(1, int(round(1.0 / mesh)))
    while n > 1 and math.comb(n + K - 1, K - 1) > cap:
        n -= 1
    return n


def _refine(stats: SurrogateStats, x: np.ndarray, gamma: float, iters: int = 500) -> tuple[np.ndarray, float]:
    """Projected gradient with backtracking; the objective is convex for gamma >= 2."""
    a, g = stats.per_action_gap, stats.per_action_info
    fx = ir_value(stats, x, gamma)
    step = 1.0
    for _ in range(iters):
        if fx == 0.0 or not math.isfinite(fx):
            break
        r, i = x @ a, x @ g
        grad = gamma * r ** (gamma - 1) * a / i - r**gamma * g / i**2
        improved = False
        while step > 1e-14:
            y = project_simplex(x - step * grad)
            fy = ir_value(stats, y, gamma)
            if fy <= fx - 1e-4 * grad @ (x - y):
                improved = True
                break
            step *= 0.5
        if not improved:
            break
        done = fx - fy <= 1e-15 * max(fx, 1e-300)
        x, fx = y, fy
        step *= 2.0
        if done:
            break
    return x, fx


def brute_ir_minimizer(stats: SurrogateStats, gamma: float = 2.0, mesh: float = 0.02,
                       refine: bool = True, max_points: int = MAX_MESH_POINTS) -> tuple[Policy, float]:
    """Minimize the gamma-information ratio over a simplex mesh, then polish the
    best mesh point by projected gradient. For large K the mesh is coarsened
    until it has at most ``max_points`` points."""
    K = stats.K
    if K > 8:
        raise ValueError("brute-force minimizer is limited to K <= 8")
    P = simplex_mesh(K, _mesh_divisions(K, mesh, max_points))
    r = P @ stats.per_action_gap
    i = P @ stats.per_action_info
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(i > 0, r**gamma / np.where(i > 0, i, 1.0), np.where(r <= 0, 0.0, np.inf))
    best = int(np.argmin(vals))
    x, fx = P[best], float(vals[best])
    if refine:
        x, fx = _refine(stats, x.copy(), gamma)
    x = np.maximum(x, 0.0)
    return Policy(x / x.sum()), fx


def _random_stats(rng: np.random.Generator, K_max: int = 8, M_max: int = 16, d_max: int = 5) -> SurrogateStats:
    K = int(rng.integers(2, K_max + 1))
    M = int(rng.integers(2, M_max + 1))
    d = int(rng.integers(2, d_max + 1))
    prior = SubsetPrior(d, int(rng.integers(1, d + 1)))
    samples = np.array([sample_subset_prior(prior, rng) for _ in range(M)])
    actions = rng.uniform(-1, 1, size=(K, d))
    return surrogate_stats(samples, actions)


def check_gir_minimizer(trials: int = 40, rng: np.random.Generator | None = None,
                        gammas=(2.0, 3.0, 4.0)) -> LemmaReport:
    """IR^gamma(SOIDS) <= 2^(gamma-2) min IR^gamma, relative violation."""
    rng = rng or np.random.default_rng(0)
    worst, n = 0.0, 0
    for _ in range(trials):
        stats = _random_stats(rng)
        if not np.any(stats.per_action_info > 0):
            continue
        probs = soids_policy(stats).probs
        for gamma in gammas:
            _, best = brute_ir_minimizer(stats, gamma)
            ours = ir_value(stats, probs, gamma)
            bound = 2.0 ** (gamma - 2) * best
            worst = max(worst, ours if bound == 0 else ours / bound - 1.0)
        n += 1
    return _report("gir_minimizer", n, worst)


def check_pair_scan(trials: int = 40, rng: np.random.Generator | None = None) -> LemmaReport:
    """Closed-form pair scan against the simplex oracle for the 2-ratio."""
    rng = rng or np.random.default_rng(1)
    worst, n = -math.inf, 0
    for _ in range(trials):
        stats = _random_stats(rng)
        if not np.any(stats.per_action_info > 0):
            continue
        ours = ir_value(stats, soids_policy(stats).probs, 2.0)
        _, best = brute_ir_minimizer(stats, 2.0)
        worst = max(worst, ours - best if best == 0 else ours / best - 1.0)
        n += 1
    return _report("pair_scan", n, worst)


# ---------------------------------------------------------------- AM-GM

def amgm_conjugate_constant(p: float) -> float:
    return (p - 1.0) * (1.0 / p) ** (p / (p - 1.0))


def amgm_constant(p: float) -> float:
    return p * (1.0 / (p - 1.0)) ** ((p - 1.0) / p)


def check_amgm_constants(rng: np.random.Generator | None = None, ps=(2.0, 3.0, 4.0, 7.5)) -> LemmaReport:
    rng = rng or np.random.default_rng(2)
    worst = 0.0
    for p in ps:
        cs, c = amgm_conjugate_constant(p), amgm_constant(p)
        worst = max(worst, abs(c * cs ** ((p - 1) / p) - 1.0))
        worst = max(worst, c - 2.0)
        if p != 2.0 and not c < 2.0:
            worst = max(worst, 1.0)
        x, y, lam = (10.0 ** rng.uniform(-3, 3, size=(3, 2000)))
        lhs = (x * y) ** (1.0 / p)
        rhs = x / lam + cs * (lam * y) ** (1.0 / (p - 1.0))
        worst = max(worst, float(np.max((lhs - rhs) / np.maximum(rhs, 1e-300))))
    worst = max(worst, abs(amgm_constant(2.0) - 2.0))
    worst = max(worst, abs(amgm_conjugate_constant(3.0) - 2.0 / 3.0**1.5))
    return _report("amgm", len(ps), worst)


# ---------------------------------------------------------------- covering

def l1_cover(s: int, rho: float, h: float | None = None) -> np.ndarray:
    """Greedy separated subset of a lattice over the s-dimensional l1 ball.

    Lattice spacing h puts every ball point within s h / 2 (l1) of a lattice
    point of norm <= 1 + s h / 2; centres are (rho - s h / 2)-separated and
    cover every such lattice point, hence every ball point within rho.
    """
    h = h or rho / (4.0 * s)
    slack = s * h / 2.0
    m = int(math.ceil((1.0 + slack) / h))
    axes = np.arange(-m, m + 1) * h
    grid = np.stack(np.meshgrid(*([axes] * s), indexing="ij"), axis=-1).reshape(-1, s)
    grid = grid[np.abs(grid).sum(axis=1) <= 1.0 + slack + 1e-12]
    r = rho - slack
    uncovered = np.ones(len(grid), dtype=bool)
    centres = []
    for i in range(len(grid)):
        if uncovered[i]:
            centres.append(grid[i])
            uncovered &= np.abs(grid - grid[i]).sum(axis=1) > r
    return np.array(centres)


def check_covering_bound(d: int = 5, s: int = 2, rho: float = 0.5, n_points: int = 2000,
                         rng: np.random.Generator | None = None) -> LemmaReport:
    if d > 6 or s > 2:
        raise ValueError("the explicit cover is only built for d <= 6, s <= 2")
    rng = rng or np.random.default_rng(3)
    local = l1_cover(s, rho)
    supports = list(combinations(range(d), s))
    size = len(supports) * len(local)
    bound = math.comb(d, s) * (1.0 + 2.0 / rho) ** s
    cover = np.zeros((size, d))
    for i, S in enumerate(supports):
        cover[i * len(local):(i + 1) * len(local), list(S)] = local
    prior = SubsetPrior(d, s)
    pts = np.array([sample_subset_prior(prior, rng) for _ in range(n_points)])
    dist = np.array([np.abs(cover - p).sum(axis=1).min() for p in pts])
    violation = max(float(dist.max()) - rho, size - bound)
    return _report("covering", n_points, violation, cover_size=size, bound=bound, max_distance=float(dist.max()))


# ---------------------------------------------------------------- information gains

def check_sig_tig(trials: int = 200, rng: np.random.Generator | None = None) -> LemmaReport:
    rng = rng or np.random.default_rng(4)
    worst = -math.inf
    for _ in range(trials):
        d, K, M = (int(v) for v in rng.integers([1, 1, 1], [8, 12, 40]))
        samples = rng.normal(size=(M, d))
        actions = rng.uniform(-1, 1, size=(K, d))
        theta0 = rng.normal(size=d)
        pi = rng.dirichlet(np.ones(K))
        sig = surrogate_info_gain(surrogate_stats(samples, actions), pi)
        tig = true_info_gain(samples, pi, theta0, actions)
        worst = max(worst, sig - tig)
    return _report("sig_tig", trials, worst)


def check_ir2_fgts(trials: int = 200, rng: np.random.Generator | None = None) -> LemmaReport:
    """IR^2(SOIDS) <= IR^2(FGTS) <= 2d on random empirical posteriors."""
    rng = rng or np.random.default_rng(5)
    worst, n = -math.inf, 0
    for _ in range(trials):
        d, K, M = (int(v) for v in rng.integers([1, 2, 2], [10, 30, 60]))
        samples = rng.normal(size=(M, d)) * rng.uniform(0.1, 3.0)
        actions = rng.uniform(-1, 1, size=(K, d))
        stats = surrogate_stats(samples, actions)
        fg = fgts_policy(samples, actions).probs
        if fg @ stats.per_action_info <= 0:
            continue
        ir_fg = ir_value(stats, fg, 2.0)
        ir_so = ir_value(stats, soids_policy(stats).probs, 2.0)
        worst = max(worst, ir_fg - 2 * d, ir_so - ir_fg)
        n += 1
    return _report("ir2_fgts", n, worst)


def sparse_action_instance(d: int, s: int, rng: np.random.Generator, extra: int = 20) -> np.ndarray:
    """Signed basis plus random actions with at most s nonzero entries in
    {-1, +1}; every parameter of the subset prior then has an s-sparse
    optimal action."""
    basis = np.vstack([np.eye(d), -np.eye(d)])
    rows = []
    for _ in range(extra):
        a = np.zeros(d)
        S = rng.choice(d, size=int(rng.integers(1, s + 1)), replace=False)
        a[S] = rng.choice((-1.0, 1.0), size=S.size)
        rows.append(a)
    return np.vstack([basis] + rows)


def check_ir3_mixture(trials: int = 20, rng: np.random.Generator | None = None) -> LemmaReport:
    """min over mixture weights of IR^3((1-w) FGTS + w mu) <= 27 s / c_min,
    relative excess, on sparse-action instances with subset-prior samples."""
    rng = rng or np.random.default_rng(6)
    worst, n, skipped = -math.inf, 0, 0
    for _ in range(trials):
        d = int(rng.integers(4, 11))
        s = int(rng.integers(1, max(2, d // 2) + 1))
        actions = sparse_action_instance(d, s, rng)
        prior = SubsetPrior(d, s)
        samples = np.array([sample_subset_prior(prior, rng) for _ in range(int(rng.integers(20, 101)))])
        if not sparse_optimal_screen(samples, actions, s):
            skipped += 1
            continue
        design = exploratory_design(actions)
        stats = surrogate_stats(samples, actions)
        best = min_mixture_ratio(stats, fgts_policy(samples, actions), design.mu, 3.0)
        worst = max(worst, best / (27.0 * s / design.c_min) - 1.0)
        n += 1
    return _report("ir3_mixture", n, worst, skipped=skipped)


# ---------------------------------------------------------------- Monte Carlo checks

def check_supermartingale(draws: int = 100_000, rng: np.random.Generator | None = None, steps: int = 4) -> LemmaReport:
    """Mean of prod_s p(Y_s | theta, A_s) / p(Y_s | theta0, A_s) under theta0,
    for Gaussian and Rademacher noise, against 1 + 3 SE."""
    rng = rng or np.random.default_rng(7)
    d = 5
    prior = SubsetPrior(d, 2)
    theta, theta0 = sample_subset_prior(prior, rng), sample_subset_prior(prior, rng)
    A = rng.uniform(-1, 1, size=(steps, d))
    worst = -math.inf
    means = {}
    for kind in ("gaussian", "rademacher"):
        eps = rng.standard_normal((draws, steps)) if kind == "gaussian" else rng.choice((-1.0, 1.0), size=(draws, steps))
        Y = A @ theta0 + eps
        log_ratio = -0.5 * ((Y - A @ theta) ** 2 - (Y - A @ theta0) ** 2)
        prod = np.exp(log_ratio.sum(axis=1))
        se = prod.std() / math.sqrt(draws)
        worst = max(worst, prod.mean() - 1.0 - 3.0 * se)
        means[kind] = float(prod.mean())
    return _report("supermartingale", draws, worst, means=means)


def check_hoeffding(draws: int = 100_000, rng: np.random.Generator | None = None) -> LemmaReport:
    """(1/eta) log E exp(eta X) <= E X + eta E X^2 <= 2 E X for X in [0, 1/eta]."""
    rng = rng or np.random.default_rng(8)
    worst = -math.inf
    cases = 0
    for eta in (0.1, 0.5, 1.0, 4.0):
        for shape in ("uniform", "beta", "two_point"):
            if shape == "uniform":
                X = rng.uniform(0, 1 / eta, draws)
            elif shape == "beta":
                X = rng.beta(0.5, 2.0, draws) / eta
            else:
                X = np.where(rng.random(draws) < 0.3, 1 / eta, 0.0)
            e = np.exp(eta * X)
            lhs = math.log(e.mean()) / eta
            mid = X.mean() + eta * np.mean(X**2)
            rhs = 2.0 * X.mean()
            se = math.hypot(e.std() / (eta * e.mean()), 2.0 * X.std()) / math.sqrt(draws)
            worst = max(worst, lhs - mid, lhs - rhs - 3.0 * se)
            cases += 1
    return _report("hoeffding", cases * draws, worst)


def check_kl_prior(draws: int = 100_000, rng: np.random.Generator | None = None,
                   grid=((5, 1, 0.5), (8, 2, 0.1), (10, 3, 0.3), (20, 2, 0.05))) -> LemmaReport:
    """KL(uniform on (1-eps) theta + eps ball || subset prior) <= s log(2ed/(eps s)).

    The log-density ratio is estimated by Monte Carlo at draws from the
    comparator; both densities are taken on the comparator's support subspace.
    """
    rng = rng or np.random.default_rng(9)
    worst = -math.inf
    for d, s, eps in grid:
        prior = SubsetPrior(d, s)
        S = np.sort(rng.choice(d, size=s, replace=False))
        centre = sample_l1_ball(s, rng)
        n = draws // len(grid)
        local = np.array([(1 - eps) * centre + eps * sample_l1_ball(s, rng) for _ in range(n)])
        local = local[np.all(local != 0, axis=1)]
        theta = np.zeros((len(local), d))
        theta[:, S] = local
        log_p = -l1_ball_log_volume(s, eps)
        logr = np.array([log_p - subset_prior_log_density(prior, t) for t in theta])
        bound = s * math.log(2 * math.e * d / (eps * s))
        worst = max(worst, logr.mean() - bound - 3.0 * logr.std() / math.sqrt(len(logr)))
    return _report("kl_prior", draws, worst)


# ---------------------------------------------------------------- deterministic inequalities

def policy_gap(policy_probs: np.ndarray, theta: np.ndarray, actions: np.ndarray) -> float:
    r = actions @ theta
    return float(policy_probs @ (r.max() - r))


def check_lipschitz(trials: int = 2000, rng: np.random.Generator | None = None) -> LemmaReport:
    rng = rng or np.random.default_rng(10)
    worst = -math.inf
    for _ in range(trials):
        d, K = int(rng.integers(1, 10)), int(rng.integers(1, 20))
        A = rng.uniform(-1, 1, size=(K, d))
        A[rng.random(size=(K, d)) < 0.2] = rng.choice((-1.0, 1.0))
        pi = rng.dirichlet(np.ones(K))
        th, th2 = rng.normal(size=(2, d)) * rng.uniform(0.01, 5)
        lhs = abs(policy_gap(pi, th, A) - policy_gap(pi, th2, A))
        worst = max(worst, lhs - 2.0 * np.abs(th - th2).sum())
    return _report("lipschitz", trials, worst)


def _rate_sum_bound_2(T: int, d: int, s: int) -> tuple[float, float]:
    lam = [lambda_theorem2_parts(t, d, s, 0.0)[0] for t in range(T)]
    C = c_t(T, d, s)
    lhs = C / lam[T - 1] + (32.0 / 3.0) * sum(lam) * 2 * d
    return lhs, 16.0 * math.sqrt(2.0 / 3.0 * C * d * T)


def _rate_sum_bound_3(T: int, d: int, s: int, c_min: float) -> tuple[float, float]:
    lam = [lambda_theorem2_parts(t, d, s, c_min)[1] for t in range(T)]
    C = c_t(T, d, s)
    c3 = amgm_conjugate_constant(3.0)
    lhs = C / lam[T - 1] + (16.0 / 3.0) * c3 * sum(math.sqrt(3.0 * l * 54.0 * s / c_min) for l in lam)
    return lhs, 12.0 * 6.0 ** (1.0 / 3.0) * (s * C / c_min) ** (1.0 / 3.0) * T ** (2.0 / 3.0)


def check_schedule_bounds(grid=None) -> LemmaReport:
    """Both schedule inequalities with IR^2 <= 2d and IR^3 <= 54 s / c_min;
    violation is the worst relative excess lhs / rhs - 1."""
    grid = grid or [(d, s, T, c) for d in (5, 20, 40, 100) for s in (1, 2, d // 10 or 1)
                    for T in (10, 100, 1000) for c in (0.01, 0.05, 0.2)]
    worst = -math.inf
    for d, s, T, c_min in grid:
        lhs, rhs = _rate_sum_bound_2(T, d, s)
        worst = max(worst, lhs / rhs - 1.0)
        lhs, rhs = _rate_sum_bound_3(T, d, s, c_min)
        worst = max(worst, lhs / rhs - 1.0)
    return _report("schedule_bounds", len(grid), worst)


def check_w_log(rng: np.random.Generator | None = None) -> LemmaReport:
    """t >= 2a log(ea) + 2b implies t >= a log(et) + b, on the schedule's
    (a, b) over a (d, s) grid and on random (a >= 1, b >= 0); also that the
    resulting threshold is t_min_threshold."""
    rng = rng or np.random.default_rng(11)
    pairs = []
    for d in (2, 5, 10, 20, 40, 100, 1000):
        for s in range(1, d + 1):
            if s in (1, 2, 3, d // 10, d // 2, d):
                a = 8.0 * math.sqrt(3 * s)
                pairs.append((a, math.sqrt(3 * s) * (20.0 / s + 8.0 * math.log(d / s)), d, s))
    for a, b in zip(1.0 + rng.exponential(20.0, 200), rng.exponential(50.0, 200)):
        pairs.append((a, b, None, None))
    worst = -math.inf
    for a, b, d, s in pairs:
        t0 = 2 * a * math.log(math.e * a) + 2 * b
        ts = t0 * np.geomspace(1.0, 1e4, 200)
        worst = max(worst, float(np.max(a * np.log(math.e * ts) + b - ts)))
        if d is not None:
            worst = max(worst, abs(t0 - t_min_threshold(d, s)) / t0 - 1e-12)
    return _report("w_log", len(pairs), worst)


def check_monotonicity(rng: np.random.Generator | None = None, horizon: int = 10_000) -> LemmaReport:
    """Largest increase between consecutive rates of each schedule (t >= 1),
    plus the sequence log(C1 t) / (C2 t) with C1 > e."""
    rng = rng or np.random.default_rng(12)
    worst = -math.inf
    ts = range(1, horizon + 1)
    n = 0
    for d, s in ((20, 2), (40, 4), (100, 10), (10, 5), (3, 1)):
        for c_min in (0.0, 0.01, 0.1, 1.0 / d):
            lam = np.array([lambda_theorem2(t, d, s, c_min) for t in ts])
            worst = max(worst, float(np.max(np.diff(lam))))
            n += 1
        lam = np.array([lambda_experimental(t, d, s) for t in ts])
        worst = max(worst, float(np.max(np.diff(lam))))
        if s <= d / 2:
            state = ScheduleState(d, s, 0.05)
            prev = lambda_theorem3(state)
            for _ in range(2000):
                state.update(rng.exponential(2 * d), rng.exponential(10.0))
                cur = lambda_theorem3(state)
                worst = max(worst, cur - prev)
                prev = cur
        n += 2
    t = np.arange(1, horizon + 1, dtype=float)
    for C1, C2 in ((math.e + 1e-9, 1.0), (10.0, 0.5), (1e3, 7.0)):
        seq = np.log(C1 * t) / (C2 * t)
        worst = max(worst, float(np.max(np.diff(seq))))
        n += 1
    return _report("monotonicity", n, worst)


def check_implicit_rb(trials: int = 500, rng: np.random.Generator | None = None) -> LemmaReport:
    rng = rng or np.random.default_rng(13)
    funcs = (
        (lambda x: x**-0.5, lambda lo, hi: 2.0 * (math.sqrt(hi) - math.sqrt(lo))),
        (lambda x: x ** (-1.0 / 3.0), lambda lo, hi: 1.5 * (hi ** (2.0 / 3.0) - lo ** (2.0 / 3.0))),
        (lambda x: np.exp(-x), lambda lo, hi: math.exp(-lo) - math.exp(-hi)),
    )
    worst = -math.inf
    for _ in range(trials):
        T = int(rng.integers(1, 200))
        a = rng.exponential(rng.uniform(0.1, 10.0), size=T + 1)
        a[rng.random(T + 1) < 0.2] = 0.0
        a[0] = max(a[0], 1e-3)
        partial = np.cumsum(a)
        for f, F in funcs:
            lhs = float(np.sum(a[1:] * f(partial[1:])))
            rhs = F(a[0], partial[-1])
            worst = max(worst, (lhs - rhs) / max(1.0, abs(rhs)))
    return _report("implicit_rb", trials, worst)


CHECKS = {
    "gir_minimizer": check_gir_minimizer,
    "pair_scan": check_pair_scan,
    "amgm": check_amgm_constants,
    "covering": check_covering_bound,
    "sig_tig": check_sig_tig,
    "ir2_fgts": check_ir2_fgts,
    "ir3_mixture": check_ir3_mixture,
    "supermartingale": check_supermartingale,
    "hoeffding": check_hoeffding,
    "kl_prior": check_kl_prior,
    "lipschitz": check_lipschitz,
    "schedule_bounds": check_schedule_bounds,
    "w_log": check_w_log,
    "monotonicity": check_monotonicity,
    "implicit_rb": check_implicit_rb,
}


def run_all(names=None, seed: int | None = None) -> list[LemmaReport]:
    names = list(CHECKS) if not names else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    reports = []
    for i, name in enumerate(names):
        fn = CHECKS[name]
        if seed is not None and "rng" in fn.__code__.co_varnames:
            reports.append(fn(rng=np.random.default_rng([seed, i])))
        else:
            reports.append(fn())
    return reports
