"""Control-plane message sizes and F1-C delay components.

Wire sizes stack the F1AP, PDCP, SCTP, IP, Ethernet and PHY overheads on
top of the RRC payload, then add the transport security overhead.  The
published RRC size table does not follow from any single layer sum, so a
calibration table of signed per-configuration offsets maps the raw sum
onto the published figures.  :func:`raw_wire_size` always exposes the
uncalibrated sum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from ._validation import check_non_negative, check_positive


class Message(str, enum.Enum):
    RRC_SETUP_REQUEST = "rrc_setup_request"
    RRC_SETUP = "rrc_setup"
    RRC_SETUP_COMPLETE = "rrc_setup_complete"


class Bound(str, enum.Enum):
    MIN = "min"
    MAX = "max"


class Security(str, enum.Enum):
    TLS = "tls"
    IPSEC = "ipsec"
    NONE = "none"


# F1AP overhead per RRC message, bytes.
F1AP_OVERHEAD = {
    Message.RRC_SETUP_REQUEST: 16,
    Message.RRC_SETUP: 10,
    Message.RRC_SETUP_COMPLETE: 10,
}

# RRC payload size ranges, bytes (without / with optional fields).
RRC_PAYLOAD = {
    Message.RRC_SETUP_REQUEST: (6, 6),
    Message.RRC_SETUP: (18, 22),
    Message.RRC_SETUP_COMPLETE: (23, 32),
}

SECURITY_OVERHEAD = {
    Security.TLS: (25, 40),
    Security.IPSEC: (57, 57),
    Security.NONE: (0, 0),
}

# Published on-the-wire sizes (bytes) per message and security protocol.
PUBLISHED_SIZES = {
    (Message.RRC_SETUP_REQUEST, Security.TLS): (124, 139),
    (Message.RRC_SETUP_REQUEST, Security.IPSEC): (156, 156),
    (Message.RRC_SETUP, Security.TLS): (128, 143),
    (Message.RRC_SETUP, Security.IPSEC): (160, 164),
    (Message.RRC_SETUP_COMPLETE, Security.TLS): (136, 151),
    (Message.RRC_SETUP_COMPLETE, Security.IPSEC): (168, 174),
}

IPV4_HEADER = 20
IPV6_HEADER = 40


def _pick(pair: tuple[int, int], bound: Bound) -> int:
    return pair[0] if Bound(bound) is Bound.MIN else pair[1]


@dataclass(frozen=True)
class MessageSpec:
    """One RRC message carried over F1-C."""

    name: Message
    rrc_payload_bytes: tuple[int, int]
    f1ap_overhead_bytes: int

    def __post_init__(self):
        object.__setattr__(self, "name", Message(self.name))
        low, high = (int(b) for b in self.rrc_payload_bytes)
        object.__setattr__(self, "rrc_payload_bytes", (low, high))
        if low > high:
            raise ValueError(f"{self.name.value}: payload range {low}..{high} is inverted")
        if self.f1ap_overhead_bytes != F1AP_OVERHEAD[self.name]:
            raise ValueError(
                f"{self.name.value}: F1AP overhead must be {F1AP_OVERHEAD[self.name]} bytes, "
                f"got {self.f1ap_overhead_bytes}"
            )

    @classmethod
    def default(cls, name: Message | str) -> "MessageSpec":
        name = Message(name)
        return cls(name, RRC_PAYLOAD[name], F1AP_OVERHEAD[name])


ATTACHMENT_SEQUENCE = tuple(MessageSpec.default(m) for m in Message)


@dataclass(frozen=True)
class SecurityProtocol:
    kind: Security
    overhead_bytes: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "kind", Security(self.kind))
        expected = SECURITY_OVERHEAD[self.kind]
        if tuple(self.overhead_bytes) != expected:
            raise ValueError(f"{self.kind.value} overhead must be {expected}, got {self.overhead_bytes}")
        object.__setattr__(self, "overhead_bytes", expected)

    @classmethod
    def of(cls, kind: Security | str) -> "SecurityProtocol":
        kind = Security(kind)
        return cls(kind, SECURITY_OVERHEAD[kind])


TLS = SecurityProtocol.of(Security.TLS)
IPSEC = SecurityProtocol.of(Security.IPSEC)
NO_SECURITY = SecurityProtocol.of(Security.NONE)


@dataclass(frozen=True)
class OverheadStack:
    """Per-layer header overheads in bytes.

    ``f1ap_bytes=None`` takes the F1AP overhead from each message; an integer
    overrides it for every message (0 drops the layer).
    """

    f1ap_bytes: int | None = None
    pdcp_bytes: int = 8
    sctp_bytes: int = 28
    ip_bytes: int = IPV4_HEADER
    ethernet_bytes: int = 18
    phy_bytes: int = 9
    sctp_padding: bool = True

    def __post_init__(self):
        for name in ("pdcp_bytes", "sctp_bytes", "ip_bytes", "ethernet_bytes", "phy_bytes"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.f1ap_bytes is not None and self.f1ap_bytes < 0:
            raise ValueError("f1ap_bytes must be >= 0")

    @classmethod
    def zeroed(cls) -> "OverheadStack":
        return cls(0, 0, 0, 0, 0, 0, sctp_padding=False)

    @classmethod
    def ipv6(cls) -> "OverheadStack":
        return cls(ip_bytes=IPV6_HEADER)


DEFAULT_STACK = OverheadStack()


def raw_wire_size(msg: MessageSpec, stack: OverheadStack, sec: SecurityProtocol,
                  bound: Bound | str = Bound.MAX) -> int:
    """Layer-by-layer byte count, no calibration."""
    bound = Bound(bound)
    payload = _pick(msg.rrc_payload_bytes, bound)
    if payload <= 0:
        raise ValueError(f"{msg.name.value}: payload must be positive, got {payload}")
    f1ap = msg.f1ap_overhead_bytes if stack.f1ap_bytes is None else stack.f1ap_bytes
    sctp_payload = payload + f1ap + stack.pdcp_bytes + stack.sctp_bytes
    if stack.sctp_padding:
        sctp_payload = 4 * math.ceil(sctp_payload / 4)
    lower = stack.ip_bytes + stack.ethernet_bytes + stack.phy_bytes
    return sctp_payload + lower + _pick(sec.overhead_bytes, bound)


@dataclass(frozen=True)
class Calibration:
    """Signed byte offsets reconciling :func:`raw_wire_size` with a size table.

    Offsets only apply to the exact stack and message specs they were
    derived for.
    """

    stack: OverheadStack
    offsets: Mapping[tuple[MessageSpec, Security, Bound], int] = field(default_factory=dict)

    @classmethod
    def from_table(cls, table: Mapping[tuple[Message, Security], tuple[int, int]],
                   stack: OverheadStack = DEFAULT_STACK,
                   messages: Sequence[MessageSpec] = ATTACHMENT_SEQUENCE) -> "Calibration":
        offsets = {}
        by_name = {m.name: m for m in messages}
        for (name, kind), sizes in table.items():
            msg = by_name.get(Message(name))
            if msg is None:
                continue
            sec = SecurityProtocol.of(kind)
            for bound in Bound:
                offsets[(msg, sec.kind, bound)] = _pick(sizes, bound) - raw_wire_size(msg, stack, sec, bound)
        return cls(stack, offsets)

    def offset(self, msg: MessageSpec, stack: OverheadStack, sec: SecurityProtocol, bound: Bound) -> int:
        if stack != self.stack:
            return 0
        return self.offsets.get((msg, sec.kind, Bound(bound)), 0)


DEFAULT_CALIBRATION = Calibration.from_table(PUBLISHED_SIZES)


def wire_size(msg: MessageSpec, stack: OverheadStack = DEFAULT_STACK, sec: SecurityProtocol = TLS,
              bound: Bound | str = Bound.MAX,
              calibration: Calibration | None = DEFAULT_CALIBRATION) -> int:
    """Bytes on the F1-C link for one message at the requested range bound."""
    bound = Bound(bound)
    size = raw_wire_size(msg, stack, sec, bound)
    if calibration is not None:
        size += calibration.offset(msg, stack, sec, bound)
    return size


def transmission_delay(size_bytes: float, rate_bps: float) -> float:
    rate_bps = check_positive(rate_bps, "rate_bps")
    size_bytes = check_positive(size_bytes, "size_bytes")
    return size_bytes * 8.0 / rate_bps


def propagation_delay(distance_m: float, speed_mps: float = 2e8) -> float:
    speed_mps = check_positive(speed_mps, "speed_mps")
    return check_non_negative(distance_m, "distance_m") / speed_mps


def processing_delay_residual(total_s: float, dt_s: float, dp_s: float, dq_s: float = 0.0) -> float:
    """Processing share of a one-way delay budget once the other components are removed."""
    residual = total_s - (dt_s + dp_s + dq_s)
    if residual < 0:
        raise ValueError(
            f"delay budget {total_s!r} s is smaller than transmission+propagation+queuing "
            f"({dt_s + dp_s + dq_s!r} s)"
        )
    return residual


@dataclass(frozen=True)
class DelayParams:
    """Link and processing parameters, all in SI units.

    ``per_message_processing_s`` holds the internal processing time of each
    attachment message.  ``f1_budget_s`` is the one-way DU-CU budget used to
    attribute a processing residual on the F1 link.
    """

    transmission_rate_bps: float = 1e9
    link_distance_m: float = 100.0
    propagation_speed_mps: float = 2e8
    per_message_processing_s: tuple[float, ...] = (0.010, 0.010, 0.010)
    d_ru_bbu_s: float = 0.25e-3
    d_ru_cu_s: float = 1.75e-3
    queuing_delay_s: float = 0.0
    f1_budget_s: float = 1.5e-3

    def __post_init__(self):
        check_positive(self.transmission_rate_bps, "transmission_rate_bps")
        check_positive(self.propagation_speed_mps, "propagation_speed_mps")
        check_non_negative(self.link_distance_m, "link_distance_m")
        object.__setattr__(self, "per_message_processing_s", tuple(float(t) for t in self.per_message_processing_s))
        for t in self.per_message_processing_s:
            check_non_negative(t, "per_message_processing_s entry")
        for name in ("d_ru_bbu_s", "d_ru_cu_s", "queuing_delay_s", "f1_budget_s"):
            check_non_negative(getattr(self, name), name)

    @property
    def messages(self) -> int:
        return len(self.per_message_processing_s)

    @property
    def total_processing_s(self) -> float:
        return math.fsum(self.per_message_processing_s)


class F1Components(NamedTuple):
    message: Message
    size_bytes: int
    transmission_s: float
    propagation_s: float
    processing_s: float
    queuing_s: float

    @property
    def total_s(self) -> float:
        return self.transmission_s + self.propagation_s + self.processing_s + self.queuing_s


def f1_delay_components(msgs: Sequence[MessageSpec], params: DelayParams,
                        stack: OverheadStack = DEFAULT_STACK, sec: SecurityProtocol = TLS,
                        bound: Bound | str = Bound.MAX, processing_s: Sequence[float] | None = None,
                        calibration: Calibration | None = DEFAULT_CALIBRATION) -> list[F1Components]:
    """Per-message delay split on the F1-C link.

    Without explicit ``processing_s`` each message's processing delay is the
    residual of ``params.f1_budget_s``.
    """
    if not msgs:
        raise ValueError("attachment sequence must contain at least one message")
    if processing_s is not None and len(processing_s) != len(msgs):
        raise ValueError(f"need {len(msgs)} processing delays, got {len(processing_s)}")
    dp = propagation_delay(params.link_distance_m, params.propagation_speed_mps)
    dq = params.queuing_delay_s
    rows = []
    for i, msg in enumerate(msgs):
        size = wire_size(msg, stack, sec, bound, calibration)
        dt = transmission_delay(size, params.transmission_rate_bps)
        if processing_s is None:
            dr = processing_delay_residual(params.f1_budget_s, dt, dp, dq)
        else:
            dr = check_non_negative(processing_s[i], "processing_s entry")
        rows.append(F1Components(msg.name, size, dt, dp, dr, dq))
    return rows


def total_f1_delay(msgs: Sequence[MessageSpec], params: DelayParams,
                   stack: OverheadStack = DEFAULT_STACK, sec: SecurityProtocol = TLS,
                   bound: Bound | str = Bound.MAX, processing_s: Sequence[float] | None = None,
                   calibration: Calibration | None = DEFAULT_CALIBRATION) -> float:
    """Sum of transmission, propagation, processing and queuing delay over all messages."""
    rows = f1_delay_components(msgs, params, stack, sec, bound, processing_s, calibration)
    return math.fsum(r.total_s for r in rows)
