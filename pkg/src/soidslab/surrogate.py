"""Sample-average estimates of surrogate regret, surrogate and true information
gain, and the generalized information ratio."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .posterior import ParameterSamples


class DegenerateRatioError(ArithmeticError):
    """The information gain of the policy is zero, so the ratio is undefined."""


@dataclass(frozen=True)
class SurrogateStats:
    per_action_gap: np.ndarray
    per_action_info: np.ndarray
    mean_param: np.ndarray

    @property
    def K(self) -> int:
        return self.per_action_gap.shape[0]


def _sample_array(samples) -> np.ndarray:
    if isinstance(samples, ParameterSamples):
        return samples.samples
    return np.atleast_2d(np.asarray(samples, dtype=float))


def _probs(policy) -> np.ndarray:
    return np.asarray(getattr(policy, "probs", policy), dtype=float)


def surrogate_stats(samples, actions) -> SurrogateStats:
    """Per-action averages over the samples.

    ``per_action_gap[k]`` is the mean gap of action k, each gap measured
    against the best action of the same sample; ``per_action_info[k]`` is half
    the mean squared deviation of <theta, a_k> around the sample mean.
    """
    S = _sample_array(samples)
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    if S.shape[1] != A.shape[1]:
        raise ValueError(f"samples have dimension {S.shape[1]}, actions {A.shape[1]}")
    mean = S.mean(axis=0)
    rewards = S @ A.T
    gaps = rewards.max(axis=1, keepdims=True) - rewards
    centered = (S - mean) @ A.T
    return SurrogateStats(
        per_action_gap=gaps.mean(axis=0),
        per_action_info=0.5 * np.mean(centered**2, axis=0),
        mean_param=mean,
    )


def surrogate_regret(stats: SurrogateStats, policy) -> float:
    return float(_probs(policy) @ stats.per_action_gap)


def surrogate_info_gain(stats: SurrogateStats, policy) -> float:
    return float(_probs(policy) @ stats.per_action_info)


def info_ratio(stats: SurrogateStats, policy, gamma: float = 2.0) -> float:
    """``surrogate_regret ** gamma / surrogate_info_gain``.

    Raises DegenerateRatioError when the information gain is zero.
    """
    if gamma < 2:
        raise ValueError("gamma must be at least 2")
    info = surrogate_info_gain(stats, policy)
    if info <= 0.0:
        raise DegenerateRatioError("policy has zero surrogate information gain")
    return surrogate_regret(stats, policy) ** gamma / info


def true_info_gain(samples, policy, theta0, actions) -> float:
    """Like the surrogate information gain but centred at ``theta0``."""
    S = _sample_array(samples)
    A = np.atleast_2d(np.asarray(actions, dtype=float))
    dev = (S - np.asarray(theta0, dtype=float)) @ A.T
    return float(0.5 * _probs(policy) @ np.mean(dev**2, axis=0))
