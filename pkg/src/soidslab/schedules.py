"""Optimism learning-rate schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass

SCHEDULES = ("theorem2", "theorem3", "experimental")


def c_t(t: int, d: int, s: int) -> float:
    if t < 1:
        raise ValueError("t must be at least 1")
    return 5.0 + 2.0 * s * math.log(math.e * d * t / s)


def lambda_theorem2_parts(t: int, d: int, s: int, c_min: float) -> tuple[float, float]:
    """The unclamped (data-rich, data-poor) rates; the second is 0 when c_min = 0."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    C = c_t(t + 1, d, s)
    lam2 = math.sqrt(3.0 * C / (128.0 * d * (t + 1)))
    if c_min <= 0:
        return lam2, 0.0
    lam3 = (C * math.sqrt(c_min) / ((t + 1) * math.sqrt(s))) ** (2.0 / 3.0) / (4.0 * 6.0 ** (1.0 / 3.0))
    return lam2, lam3


def lambda_theorem2(t: int, d: int, s: int, c_min: float) -> float:
    return min(0.5, max(lambda_theorem2_parts(t, d, s, c_min)))


@dataclass
class ScheduleState:
    """Accumulators of the history-dependent schedule."""

    d: int
    s: int
    c_min: float
    sum_ir2: float = 0.0
    sum_sqrt_ir3: float = 0.0
    t: int = 0

    def update(self, ir2: float, ir3: float) -> None:
        if ir2 < 0 or ir3 < 0:
            raise ValueError("information ratios are nonnegative")
        self.sum_ir2 += ir2
        self.sum_sqrt_ir3 += math.sqrt(ir3)
        self.t += 1


def lambda_theorem3(state: ScheduleState) -> float:
    d, s = state.d, state.s
    if s > d / 2:
        raise ValueError(f"the history-dependent schedule needs s <= d/2 (d={d}, s={s})")
    lam2 = math.sqrt(s / (2.0 * d + state.sum_ir2))
    if state.c_min <= 0:
        return lam2
    lam3 = (s / (3.0 * math.sqrt(6.0) * s / math.sqrt(state.c_min) + state.sum_sqrt_ir3)) ** (2.0 / 3.0)
    return max(lam2, lam3)


def lambda_experimental(t: int, d: int, s: int) -> float:
    if t < 1:
        raise ValueError("t must be at least 1")
    L = math.log(math.e * d * t / s)
    return min(0.5, 0.1 * max(math.sqrt(s * L / (d * t)), (L / t) ** (2.0 / 3.0)))


def t_min_threshold(d: int, s: int) -> float:
    if s < 1:
        raise ValueError("s must be at least 1")
    return 40.0 * math.sqrt(3.0 / s) + 16.0 * math.sqrt(3.0 * s) * math.log(8.0 * math.e * math.sqrt(3.0) * d / math.sqrt(s))
