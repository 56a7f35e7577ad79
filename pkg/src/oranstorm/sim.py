"""Closed-loop storm simulation and a discrete-event M/M/1 oracle."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from ._validation import check_positive
from .controller import ControllerConfig, decide_servers
from .queueing import Architecture, QueueState, ServiceModel, UnstableQueueError, queue_step
from .resilience import (
    ResilienceReport,
    ResilienceWeights,
    UtilityParams,
    desired_utility,
    detect_phases,
    resilience_score,
    utility,
)
from .scenario import StormProfile, arrival_rate

TRACE_COLUMNS = ("t", "lambda", "c", "queue_len", "wait_s", "utility")


@dataclass(frozen=True)
class SimConfig:
    profile: StormProfile = field(default_factory=StormProfile)
    service: ServiceModel = field(default_factory=lambda: ServiceModel(1 / 0.03525))
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    utility: UtilityParams = field(default_factory=UtilityParams)
    resilience: ResilienceWeights = field(default_factory=ResilienceWeights)
    step_s: float = 1.0
    seed: int = 0

    def __post_init__(self):
        check_positive(self.step_s, "step_s")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class SimTrace:
    t: np.ndarray
    lam: np.ndarray
    c: np.ndarray
    queue_len: np.ndarray
    wait_s: np.ndarray
    u: np.ndarray
    config_hash: str
    architecture: Architecture
    mu: float

    def __len__(self) -> int:
        return int(self.t.size)

    def rows(self) -> Iterator[tuple]:
        for i in range(len(self)):
            yield (int(self.t[i]), float(self.lam[i]), int(self.c[i]),
                   float(self.queue_len[i]), float(self.wait_s[i]), float(self.u[i]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for t, lam, c, q, w, u in self.rows():
            writer.writerow([t, f"{lam:.12g}", c, f"{q:.12g}", f"{w:.12g}", f"{u:.12g}"])
        return buf.getvalue()

    def digest(self) -> str:
        return hashlib.sha256(self.to_csv().encode()).hexdigest()


def run(config: SimConfig) -> SimTrace:
    """Step the loop: pick c(t) from the start-of-step state, advance the queue, score utility."""
    profile, service = config.profile, config.service
    mu = service.mu_per_server
    n = profile.horizon
    cols = {k: np.empty(n) for k in ("lam", "queue_len", "wait_s", "u")}
    cs = np.empty(n, dtype=int)
    state = QueueState(0, 0.0, 0.0, service.servers)
    for t in range(n):
        lam = arrival_rate(profile, t)
        c = decide_servers(state, lam, mu, config.controller, config.utility)
        model = ServiceModel(mu, c, service.architecture)
        state = queue_step(state, lam, model, config.step_s)
        cols["lam"][t] = lam
        cs[t] = c
        cols["queue_len"][t] = state.queue_len
        cols["wait_s"][t] = state.wait_s
        cols["u"][t] = utility(lam, state.queue_len, c, mu, config.utility)
    return SimTrace(np.arange(n), cols["lam"], cs, cols["queue_len"], cols["wait_s"], cols["u"],
                    config.digest(), service.architecture, mu)


def analyze(trace: SimTrace, config: SimConfig) -> ResilienceReport:
    """Score a finished run: baseline target, phase boundaries, then the weighted score."""
    baseline_c = int(trace.c[0])
    u_des = desired_utility(config.profile.lambda_normal, baseline_c, trace.mu, config.utility)
    phases = detect_phases(trace.u, u_des, config.profile)
    return resilience_score(trace.u, u_des, phases, config.resilience, config.step_s)


def mm1_event_oracle(lam: float, mu: float, arrivals: int = 1_000_000, seed: int = 0) -> tuple[float, float]:
    """Estimate (L_s, W) for a FIFO M/M/1 queue by simulating individual customers.

    W is the mean sojourn time; L_s is the time-average number in system,
    from the area under the occupancy curve.
    """
    if lam <= 0 or mu <= 0:
        raise ValueError("rates must be positive")
    if lam >= mu:
        raise UnstableQueueError(f"lambda={lam} >= mu={mu}")
    rng = np.random.default_rng(seed)
    arrive = np.cumsum(rng.exponential(1.0 / lam, arrivals))
    service = rng.exponential(1.0 / mu, arrivals)
    depart = np.empty(arrivals)
    # Lindley recursion: service starts when both the customer and the server are ready.
    prev = 0.0
    for i in range(arrivals):
        start = arrive[i] if arrive[i] > prev else prev
        prev = start + service[i]
        depart[i] = prev
    sojourn = depart - arrive
    w_hat = float(sojourn.mean())
    # Occupancy integrates to the total sojourn over the busy horizon.
    l_hat = float(sojourn.sum() / (depart[-1] - 0.0))
    return l_hat, w_hat
