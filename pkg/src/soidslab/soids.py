"""The SOIDS agent: optimistic posterior samples, surrogate statistics and the
2-information-ratio minimizing policy, with a configurable optimism schedule."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from .env import History, Instance, RegretTrace, cumulative_regret, pull
from .policy import (
    exploratory_design,
    fgts_policy,
    min_mixture_ratio,
    soids_policy,
    sample_action,
    sparse_optimal_screen,
)
from .posterior import SamplerConfig, mcmc_sample
from .prior import RelaxedPrior
from .schedules import (
    SCHEDULES,
    ScheduleState,
    lambda_experimental,
    lambda_theorem2,
    lambda_theorem3,
)
from .surrogate import surrogate_info_gain, surrogate_regret, surrogate_stats

IR_GAMMA = 2


@dataclass
class SoidsConfig:
    """``eta=None`` resolves to 1/2 for the experimental schedule and 1/4
    otherwise. ``diagnostics`` adds FGTS and mixture ratios to every log."""

    eta: float | None = None
    schedule: str = "experimental"
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    prior: RelaxedPrior = field(default_factory=RelaxedPrior)
    diagnostics: bool = False

    def __post_init__(self):
        if self.schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}, got {self.schedule!r}")
        if self.eta is None:
            self.eta = 0.5 if self.schedule == "experimental" else 0.25
        if not self.eta > 0:
            raise ValueError("eta must be positive")


def _ratio(regret: float, info: float, gamma: float) -> float | None:
    if info > 0:
        return regret**gamma / info
    return 0.0 if regret == 0 else None


class SoidsAgent:
    """Holds the action set, history and schedule state; never sees theta0."""

    def __init__(self, actions, d: int, s: int, cfg: SoidsConfig, rng: np.random.Generator):
        self.actions = np.atleast_2d(np.asarray(actions, dtype=float))
        self.d, self.s = int(d), int(s)
        self.cfg = cfg
        self.rng = rng
        self.history = History(self.actions.shape[0])
        self.c_min = None
        self.mu = None
        if cfg.schedule != "experimental" or cfg.diagnostics:
            design = exploratory_design(self.actions)
            self.c_min, self.mu = design.c_min, design.mu
        self.schedule_state = ScheduleState(self.d, self.s, self.c_min or 0.0)
        if cfg.schedule == "theorem3":
            lambda_theorem3(self.schedule_state)
        self._init = None
        self._step = None
        self.lambdas: list[float] = []

    def current_lambda(self, t: int) -> float:
        """Rate for round t: the one available at the end of round t-1."""
        sch = self.cfg.schedule
        if sch == "theorem2":
            return lambda_theorem2(t - 1, self.d, self.s, self.c_min)
        if sch == "theorem3":
            return lambda_theorem3(self.schedule_state)
        return lambda_experimental(max(t - 1, 1), self.d, self.s)

    def act(self, t: int) -> tuple[int, dict]:
        if t < 1:
            raise ValueError("rounds start at 1")
        lam = self.current_lambda(t)
        samples = mcmc_sample(self.cfg.prior, self.history, self.actions, self.cfg.eta, lam,
                              self.cfg.sampler, self.rng, self._init, self._step)
        self._init, self._step = samples.extras["last_state"], samples.step_size
        stats = surrogate_stats(samples, self.actions)
        policy = soids_policy(stats)
        k = sample_action(policy, self.rng)

        regret = surrogate_regret(stats, policy)
        info = surrogate_info_gain(stats, policy)
        ir2 = _ratio(regret, info, 2.0)
        ir3 = _ratio(regret, info, 3.0)
        if self.cfg.schedule == "theorem3" and ir2 is not None:
            self.schedule_state.update(ir2, ir3)
        self.lambdas.append(lam)
        log = {
            "round": t,
            "lambda": lam,
            "action": k,
            "support": [int(j) for j in np.flatnonzero(policy.probs)],
            "surrogate_regret": regret,
            "info_gain": info,
            "ir2": ir2,
            "ir3": ir3,
            "acceptance": samples.acceptance_rate,
            "step_size": samples.step_size,
            "degenerate": policy.degenerate,
        }
        if self.cfg.diagnostics:
            fg = fgts_policy(samples, self.actions)
            log["ir2_fgts"] = _ratio(surrogate_regret(stats, fg), surrogate_info_gain(stats, fg), 2.0)
            mix = min_mixture_ratio(stats, fg, self.mu, 3.0)
            log["mixture_ir3_min"] = mix if math.isfinite(mix) else None
            log["sparse_screen"] = sparse_optimal_screen(samples, self.actions, self.s)
            log["c_min"] = self.c_min
        return k, log

    def observe(self, action_index: int, reward: float, t: int) -> None:
        self.history.append(action_index, reward, t)


def soids_round(agent: SoidsAgent, instance: Instance, t: int, rng: np.random.Generator) -> tuple[int, dict]:
    """One interaction: the agent acts, ``rng`` supplies the reward noise."""
    k, log = agent.act(t)
    agent.observe(k, pull(instance, k, rng), t)
    return k, log


def run_soids(instance: Instance, T: int, cfg: SoidsConfig, seed: int,
              log_stream: TextIO | None = None,
              reward_fn: Callable[[int, np.random.Generator], float] | None = None) -> tuple[RegretTrace, list[dict]]:
    """Run T rounds. The agent and the reward noise use independent streams
    spawned from ``seed``. ``reward_fn`` replaces ``pull`` when given."""
    if T < 1:
        raise ValueError("T must be at least 1")
    agent_seq, env_seq = np.random.SeedSequence(seed).spawn(2)
    agent = SoidsAgent(instance.actions, instance.d, instance.s, cfg, np.random.default_rng(agent_seq))
    env_rng = np.random.default_rng(env_seq)
    reward_fn = reward_fn or (lambda k, r: pull(instance, k, r))
    played = np.empty(T, dtype=int)
    logs = []
    for t in range(1, T + 1):
        k, log = agent.act(t)
        agent.observe(k, reward_fn(k, env_rng), t)
        played[t - 1] = k
        logs.append(log)
        if log_stream is not None:
            log_stream.write(json.dumps(log) + "\n")
    return cumulative_regret(instance.gaps[played]), logs
