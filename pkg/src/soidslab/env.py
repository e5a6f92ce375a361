"""Sparse linear bandit instances, reward generation and regret bookkeeping."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

import numpy as np


@dataclass(frozen=True)
class Instance:
    """A finite-armed sparse linear bandit.

    ``actions`` is stored as a ``(K, d)`` array. The l1 norm of ``theta0`` is
    deliberately not restricted: the desk-scale experiments use
    ``||theta0||_1 = 10`` while the theory assumes the unit ball.
    """

    d: int
    s: int
    theta0: np.ndarray
    actions: np.ndarray
    noise_std: float = 1.0

    def __post_init__(self):
        theta0 = np.array(self.theta0, dtype=float).reshape(-1)
        actions = np.atleast_2d(np.array(self.actions, dtype=float))
        object.__setattr__(self, "theta0", theta0)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "noise_std", float(self.noise_std))
        if self.d < 1 or self.s < 1 or self.s > self.d:
            raise ValueError(f"need 1 <= s <= d, got d={self.d}, s={self.s}")
        if theta0.shape != (self.d,):
            raise ValueError(f"theta0 has length {theta0.size}, expected {self.d}")
        if actions.shape[0] < 1 or actions.shape[1] != self.d:
            raise ValueError(f"actions must have shape (K, {self.d}), got {actions.shape}")
        if not (np.all(np.isfinite(theta0)) and np.all(np.isfinite(actions))):
            raise ValueError("instance contains non-finite values")
        if np.max(np.abs(actions)) > 1.0:
            raise ValueError("every action must satisfy max_j |a_j| <= 1")
        if np.count_nonzero(theta0) > self.s:
            raise ValueError(f"theta0 has more than s={self.s} nonzero entries")
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")

    @property
    def K(self) -> int:
        return self.actions.shape[0]

    @property
    def mean_rewards(self) -> np.ndarray:
        return self.actions @ self.theta0

    @property
    def gaps(self) -> np.ndarray:
        r = self.mean_rewards
        return r.max() - r

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "s": self.s,
            "theta0": self.theta0.tolist(),
            "actions": self.actions.tolist(),
            "noise_std": self.noise_std,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        return cls(
            d=int(data["d"]),
            s=int(data["s"]),
            theta0=data["theta0"],
            actions=data["actions"],
            noise_std=float(data.get("noise_std", 1.0)),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class HistoryRecord:
    round: int
    action_index: int
    reward: float


class History:
    """Ordered interaction record with per-action sufficient statistics.

    Gaussian log-likelihoods and the cumulative optimistic gap term only depend
    on how often each action was played and the reward sums, so those are kept
    up to date on every append.
    """

    def __init__(self, n_actions: int):
        if n_actions < 1:
            raise ValueError("n_actions must be positive")
        self.n_actions = int(n_actions)
        self.records: list[HistoryRecord] = []
        self.counts = np.zeros(self.n_actions)
        self.reward_sums = np.zeros(self.n_actions)
        self.reward_sq_sum = 0.0

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[HistoryRecord]:
        return iter(self.records)

    def append(self, action_index: int, reward: float, round: int | None = None) -> HistoryRecord:
        if not 0 <= action_index < self.n_actions:
            raise ValueError(f"action index {action_index} out of range [0, {self.n_actions})")
        last = self.records[-1].round if self.records else 0
        if round is None:
            round = last + 1
        if round <= last:
            raise ValueError(f"rounds must be strictly increasing ({round} after {last})")
        rec = HistoryRecord(int(round), int(action_index), float(reward))
        self.records.append(rec)
        self.counts[action_index] += 1.0
        self.reward_sums[action_index] += rec.reward
        self.reward_sq_sum += rec.reward**2
        return rec

    @classmethod
    def from_records(cls, n_actions: int, records) -> "History":
        h = cls(n_actions)
        for rec in records:
            h.append(rec.action_index, rec.reward, rec.round)
        return h

    def action_indices(self) -> np.ndarray:
        return np.array([r.action_index for r in self.records], dtype=int)

    def rewards(self) -> np.ndarray:
        return np.array([r.reward for r in self.records], dtype=float)


def as_history(history, n_actions: int) -> History:
    """Accept a History or any iterable of HistoryRecord."""
    if isinstance(history, History):
        if history.n_actions != n_actions:
            raise ValueError("history was built for a different action set")
        return history
    return History.from_records(n_actions, history or [])


@dataclass(frozen=True)
class RegretTrace:
    gaps: np.ndarray
    cumulative: np.ndarray

    def __len__(self) -> int:
        return len(self.gaps)


def pull(instance: Instance, action_index: int, rng: np.random.Generator) -> float:
    """Mean reward of the action plus Gaussian noise drawn from ``rng``.

    One standard normal is consumed per call even when ``noise_std == 0`` so
    that the stream position does not depend on the noise level.
    """
    if not 0 <= action_index < instance.K:
        raise ValueError(f"action index {action_index} out of range [0, {instance.K})")
    eps = rng.standard_normal()
    return float(instance.actions[action_index] @ instance.theta0 + instance.noise_std * eps)


def gap(instance: Instance, action_index: int) -> float:
    if not 0 <= action_index < instance.K:
        raise ValueError(f"action index {action_index} out of range [0, {instance.K})")
    return float(instance.gaps[action_index])


def cumulative_regret(gaps) -> RegretTrace:
    g = np.asarray(gaps, dtype=float).reshape(-1)
    if np.any(g < 0):
        raise ValueError("gaps must be nonnegative")
    return RegretTrace(gaps=g, cumulative=np.cumsum(g))


def make_benchmark_instance(d: int, K: int, rng: np.random.Generator) -> Instance:
    """Random instance of the benchmark family: s = d // 10, equal-weight
    leading support summing to 10, actions uniform on the cube, unit noise."""
    s = max(1, d // 10)
    theta0 = np.zeros(d)
    theta0[:s] = 10.0 / s
    actions = rng.uniform(-1.0, 1.0, size=(K, d))
    return Instance(d=d, s=s, theta0=theta0, actions=actions, noise_std=1.0)
