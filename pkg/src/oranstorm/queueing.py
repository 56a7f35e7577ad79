"""Attachment service rates, steady-state M/M/1 metrics and the fluid M/M/c recurrence."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from ._validation import check_non_negative, check_positive, check_positive_int
from .protocol_delay import DelayParams


class Architecture(str, enum.Enum):
    MONOLITHIC = "monolithic"
    OPEN_RAN = "open_ran"


class UnstableQueueError(ValueError):
    """Arrival rate meets or exceeds service capacity; no steady state exists."""


@dataclass(frozen=True)
class ServiceModel:
    mu_per_server: float
    servers: int = 1
    architecture: Architecture = Architecture.OPEN_RAN

    def __post_init__(self):
        check_positive(self.mu_per_server, "mu_per_server")
        check_positive_int(self.servers, "servers")
        object.__setattr__(self, "architecture", Architecture(self.architecture))

    @property
    def capacity(self) -> float:
        return self.servers * self.mu_per_server


@dataclass(frozen=True)
class Mm1Metrics:
    utilization: float
    expected_in_system: float
    mean_delay_s: float


@dataclass(frozen=True)
class QueueState:
    t: int = 0
    queue_len: float = 0.0
    wait_s: float = 0.0
    servers: int = 1

    def __post_init__(self):
        check_non_negative(self.queue_len, "queue_len")
        check_non_negative(self.wait_s, "wait_s")
        check_positive_int(self.servers, "servers")


def one_way_delay(params: DelayParams, architecture: Architecture | str) -> float:
    if Architecture(architecture) is Architecture.MONOLITHIC:
        return params.d_ru_bbu_s
    return params.d_ru_cu_s


def nth_ue_delay(n: int, params: DelayParams, architecture: Architecture | str) -> float:
    """Attachment completion time of the n-th UE when UEs attach one after another."""
    n = check_positive_int(n, "n")
    d = one_way_delay(params, architecture)
    per_ue = math.fsum(t + d for t in params.per_message_processing_s)
    return n * per_ue


def service_rate(params: DelayParams, architecture: Architecture | str) -> float:
    """UEs attached per second by one server."""
    if not params.per_message_processing_s:
        raise ValueError("per-message processing times are empty")
    total = nth_ue_delay(1, params, architecture)
    if total <= 0:
        raise ValueError("attachment time is zero; service rate undefined")
    return 1.0 / total


def mm1_metrics(lam: float, mu: float) -> Mm1Metrics:
    lam = check_non_negative(lam, "lambda")
    mu = check_positive(mu, "mu")
    if lam >= mu:
        raise UnstableQueueError(f"lambda={lam} >= mu={mu}: M/M/1 queue is unstable")
    rho = lam / mu
    return Mm1Metrics(rho, rho / (1.0 - rho), 1.0 / (mu - lam))


def mmc_utilization(lam: float, model: ServiceModel) -> float:
    """Offered load per unit of capacity; values above 1 mean the queue grows without bound."""
    return check_non_negative(lam, "lambda") / model.capacity


def queue_step(state: QueueState, lambda_t: float, model: ServiceModel, step_s: float = 1.0) -> QueueState:
    """Advance the fluid queue by one step: L(t+1) = max(0, L(t) + (lambda - c*mu) * step)."""
    cap = model.capacity
    nxt = max(0.0, state.queue_len + (lambda_t - cap) * step_s)
    return replace(state, t=state.t + 1, queue_len=nxt, wait_s=nxt / cap, servers=model.servers)


def servers_required(lambda_storm: float, mu: float) -> int:
    """Smallest c with c*mu >= lambda_storm."""
    lambda_storm = check_positive(lambda_storm, "lambda_storm")
    mu = check_positive(mu, "mu")
    ratio = lambda_storm / mu
    c = math.ceil(ratio)
    # guard against ratios like 3.0000000000000004 from inexact division
    if c > 1 and (c - 1) * mu >= lambda_storm:
        c -= 1
    return max(1, c)
