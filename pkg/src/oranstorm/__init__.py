"""Open RAN attachment latency, signaling-storm queueing and resilience scoring."""

from .controller import ControllerConfig, ControllerKind, decide_servers, drift, lyapunov_objective
from .protocol_delay import (
    ATTACHMENT_SEQUENCE,
    DEFAULT_STACK,
    IPSEC,
    NO_SECURITY,
    TLS,
    Bound,
    DelayParams,
    Message,
    MessageSpec,
    OverheadStack,
    SecurityProtocol,
    propagation_delay,
    processing_delay_residual,
    raw_wire_size,
    total_f1_delay,
    transmission_delay,
    wire_size,
)
from .queueing import (
    Architecture,
    Mm1Metrics,
    QueueState,
    ServiceModel,
    UnstableQueueError,
    mm1_metrics,
    mmc_utilization,
    nth_ue_delay,
    queue_step,
    servers_required,
    service_rate,
)
from .resilience import (
    ResilienceReport,
    ResilienceWeights,
    UtilityParams,
    desired_utility,
    detect_phases,
    resilience_score,
    utility,
)
from .scenario import StormProfile, arrival_rate, constant_profile
from .sim import SimConfig, SimTrace, analyze, mm1_event_oracle, run

__all__ = [
    "ATTACHMENT_SEQUENCE",
    "Architecture",
    "Bound",
    "ControllerConfig",
    "ControllerKind",
    "DEFAULT_STACK",
    "DelayParams",
    "IPSEC",
    "Message",
    "MessageSpec",
    "Mm1Metrics",
    "NO_SECURITY",
    "OverheadStack",
    "QueueState",
    "ResilienceReport",
    "ResilienceWeights",
    "SecurityProtocol",
    "ServiceModel",
    "SimConfig",
    "SimTrace",
    "StormProfile",
    "TLS",
    "UnstableQueueError",
    "UtilityParams",
    "analyze",
    "arrival_rate",
    "constant_profile",
    "decide_servers",
    "desired_utility",
    "detect_phases",
    "drift",
    "lyapunov_objective",
    "mm1_event_oracle",
    "mm1_metrics",
    "mmc_utilization",
    "nth_ue_delay",
    "processing_delay_residual",
    "propagation_delay",
    "queue_step",
    "raw_wire_size",
    "resilience_score",
    "run",
    "servers_required",
    "service_rate",
    "total_f1_delay",
    "transmission_delay",
    "utility",
    "wire_size",
]

__version__ = "0.1.0"
