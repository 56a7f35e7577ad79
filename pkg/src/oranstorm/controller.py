"""Per-step server allocation: fixed baseline and Lyapunov drift-plus-penalty."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ._validation import check_non_negative, check_positive_int
from .queueing import QueueState
from .resilience import UtilityParams, utility


class ControllerKind(str, enum.Enum):
    FIXED = "fixed"
    LYAPUNOV = "lyapunov"


@dataclass(frozen=True)
class ControllerConfig:
    kind: ControllerKind = ControllerKind.FIXED
    fixed_c: int = 1
    v: float = 1.0
    w: float = 1.0
    c_max: int = 10

    def __post_init__(self):
        object.__setattr__(self, "kind", ControllerKind(self.kind))
        check_positive_int(self.c_max, "c_max")
        check_positive_int(self.fixed_c, "fixed_c")
        if self.kind is ControllerKind.FIXED and self.fixed_c > self.c_max:
            raise ValueError(f"fixed_c={self.fixed_c} exceeds c_max={self.c_max}")
        check_non_negative(self.v, "v")
        check_non_negative(self.w, "w")

    @classmethod
    def fixed(cls, c: int, c_max: int | None = None) -> "ControllerConfig":
        return cls(ControllerKind.FIXED, fixed_c=c, c_max=max(c, c_max or c))

    @classmethod
    def adaptive(cls, v: float, w: float, c_max: int = 10) -> "ControllerConfig":
        return cls(ControllerKind.LYAPUNOV, v=v, w=w, c_max=c_max)


def drift(next_len: float, cur_len: float) -> float:
    """Change in the quadratic Lyapunov function 0.5 * L^2 between two queue lengths."""
    check_non_negative(next_len, "next_len")
    check_non_negative(cur_len, "cur_len")
    return 0.5 * (next_len * next_len - cur_len * cur_len)


def lyapunov_objective(c: int, lambda_t: float, queue_len: float, mu: float,
                       cfg: ControllerConfig, uparams: UtilityParams = UtilityParams()) -> float:
    """Drift bound plus penalty for running ``c`` servers this step.

    Uses the unclamped drift expansion; utility is evaluated at the candidate
    ``c`` and the current queue length.
    """
    c = check_positive_int(c, "c")
    if c > cfg.c_max:
        raise ValueError(f"c={c} exceeds c_max={cfg.c_max}")
    net = lambda_t - c * mu
    penalty = -cfg.v * utility(lambda_t, queue_len, c, mu, uparams) + cfg.w * c
    return queue_len * net + 0.5 * net * net + penalty


def decide_servers(state: QueueState, lambda_t: float, mu: float, cfg: ControllerConfig,
                   uparams: UtilityParams = UtilityParams()) -> int:
    if cfg.kind is ControllerKind.FIXED:
        return cfg.fixed_c
    best_c, best = 1, lyapunov_objective(1, lambda_t, state.queue_len, mu, cfg, uparams)
    for c in range(2, cfg.c_max + 1):
        obj = lyapunov_objective(c, lambda_t, state.queue_len, mu, cfg, uparams)
        if obj < best:  # strict: ties stay with the smaller c
            best_c, best = c, obj
    return best_c
