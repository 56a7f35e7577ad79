"""Two-sigmoid utility and the absorption/adaptation/recovery resilience score."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._validation import check_fraction, check_positive, check_positive_int
from .scenario import StormProfile


@dataclass(frozen=True)
class UtilityParams:
    """Weights, steepness and midpoints of the load and congestion sigmoids.

    The load midpoint is ``m_frac_a`` of the current capacity ``c*mu``; the
    congestion midpoint is ``m_frac_b`` of ``l_q_max``.
    """

    w_a: float = 0.5
    w_b: float = 0.5
    k_a: float = 0.1
    k_b: float = 0.05
    m_frac_a: float = 0.75
    m_frac_b: float = 0.5
    l_q_max: float = 500.0

    def __post_init__(self):
        if self.w_a < 0 or self.w_b < 0 or not math.isclose(self.w_a + self.w_b, 1.0, abs_tol=1e-12):
            raise ValueError(f"utility weights must be >= 0 and sum to 1, got {self.w_a}, {self.w_b}")
        check_positive(self.k_a, "k_a")
        check_positive(self.k_b, "k_b")
        check_fraction(self.m_frac_a, "m_frac_a")
        check_fraction(self.m_frac_b, "m_frac_b")
        check_positive(self.l_q_max, "l_q_max")


@dataclass(frozen=True)
class ResilienceWeights:
    w1: float = 0.4
    w2: float = 0.4
    w3: float = 0.2
    delta_t_des_s: float = 120.0

    def __post_init__(self):
        ws = (self.w1, self.w2, self.w3)
        if min(ws) < 0 or not math.isclose(sum(ws), 1.0, abs_tol=1e-12):
            raise ValueError(f"resilience weights must be >= 0 and sum to 1, got {ws}")
        check_positive(self.delta_t_des_s, "delta_t_des_s")


class Phases(NamedTuple):
    t0: int
    td: int
    tr: int
    recovered: bool = True
    disrupted: bool = True


@dataclass(frozen=True)
class ResilienceReport:
    t0: int
    td: int
    tr: int
    absorption_ratio: float
    adaptation_ratio: float
    t_rec_score: float
    p: float
    u_des: float
    recovered: bool = True
    disrupted: bool = True


# Phase-detector thresholds, as fractions of the desired utility.
DISRUPTION_THRESHOLD = 0.95
RECOVERY_THRESHOLD = 0.95
RECOVERY_HOLD_STEPS = 5


def _sigmoid(x: float) -> float:
    # 1 / (1 + exp(x)) without overflow for large |x|
    if x >= 0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


def utility(lambda_t: float, queue_len: float, servers: int, mu: float,
            params: UtilityParams = UtilityParams()) -> float:
    """System health in (0, 1); falls as arrivals approach capacity and as the queue fills."""
    servers = check_positive_int(servers, "servers")
    m_a = servers * mu * params.m_frac_a
    m_b = params.l_q_max * params.m_frac_b
    u_a = _sigmoid(params.k_a * (lambda_t - m_a))
    u_b = _sigmoid(params.k_b * (queue_len - m_b))
    return params.w_a * u_a + params.w_b * u_b


def desired_utility(lambda_normal: float, servers: int, mu: float,
                    params: UtilityParams = UtilityParams()) -> float:
    """Target utility: the baseline operating point with an empty queue."""
    if lambda_normal is None:
        raise ValueError("a baseline arrival rate is required")
    return utility(lambda_normal, 0.0, servers, mu, params)


def detect_phases(u: Sequence[float], u_des: float, profile: StormProfile,
                  threshold: float = DISRUPTION_THRESHOLD,
                  recovery_threshold: float = RECOVERY_THRESHOLD,
                  hold: int = RECOVERY_HOLD_STEPS) -> Phases:
    """Locate disruption onset, disturbance end and recovery in a utility trace.

    The disturbance end is the last ramp-down step of the profile.  Recovery
    is the first step at or after it from which utility stays above the
    recovery threshold for ``hold`` steps (or until the trace ends).  A run
    that never recovers reports the last step and ``recovered=False``.
    """
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        raise ValueError("utility trace is empty")
    last = u.size - 1
    anchor = min(profile.t_start, last)
    low = np.flatnonzero(u < threshold * u_des)
    if low.size == 0:
        return Phases(anchor, anchor, anchor, True, False)
    t0 = int(low[0])
    td = max(t0, min(profile.storm_end - 1, last))
    ok = u >= recovery_threshold * u_des
    for t in range(td, u.size):
        window = ok[t:t + hold]
        if window.all():
            return Phases(t0, td, t, True, True)
    return Phases(t0, td, last, False, True)


def _trapezoid(y: np.ndarray, step_s: float) -> float:
    if y.size < 2:
        return 0.0
    return float(step_s * (y[1:] + y[:-1]).sum() / 2.0)


def _ratio(u: np.ndarray, u_des: float, a: int, b: int, step_s: float) -> float:
    if b <= a:
        return 1.0
    # utility above the target earns no extra credit
    seg = np.minimum(u[a:b + 1], u_des)
    return _trapezoid(seg, step_s) / _trapezoid(np.full(seg.size, u_des), step_s)


def recovery_time_score(elapsed_s: float, delta_t_des_s: float) -> float:
    if elapsed_s <= delta_t_des_s:
        return 1.0
    return delta_t_des_s / elapsed_s


def resilience_score(u: Sequence[float], u_des: float, phases: Phases,
                     weights: ResilienceWeights = ResilienceWeights(), step_s: float = 1.0) -> ResilienceReport:
    u = np.asarray(u, dtype=float)
    t0, td, tr = phases.t0, phases.td, phases.tr
    if not 0 <= t0 <= td <= tr < u.size:
        raise ValueError(f"phase boundaries ({t0}, {td}, {tr}) do not fit a trace of {u.size} steps")
    if u_des <= 0:
        raise ValueError("desired utility must be positive")
    absorption = _ratio(u, u_des, t0, td, step_s)
    adaptation = _ratio(u, u_des, td, tr, step_s)
    t_rec = recovery_time_score((tr - t0) * step_s, weights.delta_t_des_s)
    p = weights.w1 * absorption + weights.w2 * adaptation + weights.w3 * t_rec
    return ResilienceReport(t0, td, tr, absorption, adaptation, t_rec, p, u_des,
                            phases.recovered, phases.disrupted)
