"""Arrival-rate profiles: a normal baseline with a ramp-up, plateau, ramp-down storm."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_non_negative, check_non_negative_int, check_positive_int


@dataclass(frozen=True)
class StormProfile:
    """Piecewise-linear arrival schedule in UEs per step.

    Ramp steps interpolate so that the last ramp-up step already sits on the
    storm plateau and the last ramp-down step is back at the normal rate.
    """

    lambda_normal: float = 20.0
    lambda_storm: float = 200.0
    t_start: int = 30
    ramp_up_steps: int = 10
    steady_steps: int = 60
    ramp_down_steps: int = 10
    horizon: int = 600

    def __post_init__(self):
        check_non_negative(self.lambda_normal, "lambda_normal")
        check_non_negative(self.lambda_storm, "lambda_storm")
        check_non_negative_int(self.t_start, "t_start")
        check_non_negative_int(self.ramp_up_steps, "ramp_up_steps")
        check_non_negative_int(self.ramp_down_steps, "ramp_down_steps")
        check_positive_int(self.horizon, "horizon")
        if self.is_constant:
            return
        check_positive_int(self.steady_steps, "steady_steps")
        if not self.lambda_storm > self.lambda_normal:
            raise ValueError("lambda_storm must exceed lambda_normal")
        if self.storm_end > self.horizon:
            raise ValueError(f"storm ends at step {self.storm_end}, beyond horizon {self.horizon}")

    @property
    def is_constant(self) -> bool:
        return self.steady_steps == 0 and self.ramp_up_steps == 0 and self.ramp_down_steps == 0

    @property
    def plateau_start(self) -> int:
        return self.t_start + self.ramp_up_steps

    @property
    def ramp_down_start(self) -> int:
        return self.plateau_start + self.steady_steps

    @property
    def storm_end(self) -> int:
        """First step after the ramp-down (exclusive end of the disturbance)."""
        return self.ramp_down_start + self.ramp_down_steps

    def rates(self) -> np.ndarray:
        return np.array([arrival_rate(self, t) for t in range(self.horizon)])


def arrival_rate(profile: StormProfile, t: int) -> float:
    if not 0 <= t < profile.horizon:
        raise IndexError(f"step {t} outside horizon [0, {profile.horizon})")
    lo, hi = profile.lambda_normal, profile.lambda_storm
    if profile.is_constant or t < profile.t_start or t >= profile.storm_end:
        return float(lo)
    if t < profile.plateau_start:
        k = t - profile.t_start + 1
        if k == profile.ramp_up_steps:
            return float(hi)
        return lo + (hi - lo) * k / profile.ramp_up_steps
    if t < profile.ramp_down_start:
        return float(hi)
    left = profile.storm_end - t - 1
    return lo + (hi - lo) * left / profile.ramp_down_steps


def constant_profile(lam: float, horizon: int) -> StormProfile:
    return StormProfile(lambda_normal=lam, lambda_storm=lam, t_start=0, ramp_up_steps=0,
                        steady_steps=0, ramp_down_steps=0, horizon=horizon)


def offered_load(profile: StormProfile) -> float:
    """Closed-form sum of the arrival rate over the horizon."""
    lo, hi = profile.lambda_normal, profile.lambda_storm
    total = lo * profile.horizon
    if profile.is_constant:
        return total
    delta = hi - lo
    total += delta * (profile.ramp_up_steps + 1) / 2 if profile.ramp_up_steps else 0.0
    total += delta * profile.steady_steps
    total += delta * (profile.ramp_down_steps - 1) / 2 if profile.ramp_down_steps else 0.0
    return total
