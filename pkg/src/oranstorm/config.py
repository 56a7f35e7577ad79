"""Experiment configuration documents.

A config is one JSON object with nested sections.  Times are in
milliseconds, arrival and service rates in UEs/s and link rates in Mbps;
:func:`build_sim_config` and :func:`build_delay_params` convert to SI.
Each entry under ``experiments`` names a kind and a partial override of
the top-level sections.
"""

from __future__ import annotations

import copy
import enum
import json
from pathlib import Path
from typing import Any

from .controller import ControllerConfig
from .protocol_delay import IPV4_HEADER, IPV6_HEADER, DelayParams, OverheadStack, SecurityProtocol
from .queueing import Architecture, ServiceModel, service_rate
from .resilience import ResilienceWeights, UtilityParams
from .scenario import StormProfile
from .sim import SimConfig


class ConfigError(ValueError):
    pass


class ExperimentKind(str, enum.Enum):
    TABLE5 = "table5"
    TABLE6 = "table6"
    TABLE7 = "table7"
    FIG4 = "fig4"
    FIG5 = "fig5"
    STORM_FIGS = "storm_figs"
    CUSTOM = "custom"


DEFAULTS: dict[str, Any] = {
    "architecture": "open_ran",
    "delays": {
        "transmission_rate_mbps": 1000.0,
        "link_distance_m": 100.0,
        "propagation_speed_mps": 2e8,
        "processing_ms": [10.0, 10.0, 10.0],
        "d_ru_bbu_ms": 0.25,
        "d_ru_cu_ms": 1.75,
        "queuing_delay_ms": 0.0,
        "f1_budget_ms": 1.5,
    },
    "stack": {
        "f1ap_bytes": None,
        "pdcp_bytes": 8,
        "sctp_bytes": 28,
        "ip_version": 4,
        "ethernet_bytes": 18,
        "phy_bytes": 9,
        "sctp_padding": True,
        "security": "tls",
    },
    "profile": {
        "lambda_normal": 20.0,
        "lambda_storm": 200.0,
        "t_start": 30,
        "ramp_up_steps": 10,
        "steady_steps": 60,
        "ramp_down_steps": 10,
        "horizon": 600,
    },
    "utility": {
        "w_a": 0.5,
        "w_b": 0.5,
        "k_a": 0.1,
        "k_b": 0.05,
        "m_frac_a": 0.75,
        "m_frac_b": 0.5,
        "l_q_max": 500.0,
    },
    "resilience": {"w1": 0.4, "w2": 0.4, "w3": 0.2, "delta_t_des_ms": 120000.0},
    "controller": {"kind": "fixed", "fixed_c": 1, "v": 1.0, "w": 1.0, "c_max": 10},
    "analysis": {
        "rhos": [0.1, 0.5, 0.9, 0.95],
        "fixed_lambda": 15.0,
        "proc_totals_ms": [10.0, 30.0, 50.0, 100.0],
        "rates_mbps": [1.0, 10.0, 100.0, 1000.0, 10000.0],
        "rho_grid": [round(0.05 * i, 2) for i in range(1, 20)],
        "storm_servers": [1, 2, 4, 8],
        "round_intermediates": None,
        "members": [],
    },
    "step_ms": 1000.0,
    "seed": 0,
}

_TABLE7_MEMBERS = ["fixed_c1", "fixed_c2", "fixed_c4", "fixed_c6",
                   "adaptive_ref", "adaptive_w1000", "adaptive_v1000"]

# single-server backlogs need ~1400 steps to drain after the default storm
_LONG = {"profile": {"horizon": 2000}}

BUILTIN_EXPERIMENTS: list[dict[str, Any]] = [
    {"name": "table5", "kind": "table5", "overrides": {"analysis": {"round_intermediates": 2}}},
    {"name": "table6", "kind": "table6", "overrides": {"analysis": {"round_intermediates": 2}}},
    {"name": "fig4", "kind": "fig4", "overrides": {}},
    {"name": "fig5", "kind": "fig5", "overrides": {}},
    {"name": "storm_figs", "kind": "storm_figs", "overrides": _LONG},
    {"name": "storm_monolithic", "kind": "custom", "overrides": {**_LONG, "architecture": "monolithic"}},
    {"name": "storm_open_ran", "kind": "custom", "overrides": _LONG},
    {"name": "fixed_c1", "kind": "custom", "overrides": {"controller": {"kind": "fixed", "fixed_c": 1}}},
    {"name": "fixed_c2", "kind": "custom", "overrides": {"controller": {"kind": "fixed", "fixed_c": 2}}},
    {"name": "fixed_c4", "kind": "custom", "overrides": {"controller": {"kind": "fixed", "fixed_c": 4}}},
    {"name": "fixed_c6", "kind": "custom", "overrides": {"controller": {"kind": "fixed", "fixed_c": 6}}},
    {"name": "adaptive_ref", "kind": "custom", "overrides": {"controller": {"kind": "lyapunov", "v": 1.0, "w": 1.0}}},
    {"name": "adaptive_w1000", "kind": "custom",
     "overrides": {"controller": {"kind": "lyapunov", "v": 1.0, "w": 1000.0}}},
    {"name": "adaptive_v1000", "kind": "custom",
     "overrides": {"controller": {"kind": "lyapunov", "v": 1000.0, "w": 1.0}}},
    {"name": "no_storm", "kind": "custom",
     "overrides": {"profile": {"lambda_storm": 20.0, "ramp_up_steps": 0, "steady_steps": 0,
                               "ramp_down_steps": 0}}},
    {"name": "table7", "kind": "table7", "overrides": {"analysis": {"members": _TABLE7_MEMBERS}}},
]


def deep_merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {where!r} must be an object")
            out[key] = deep_merge(base[key], value, where + ".")
        else:
            out[key] = copy.deepcopy(value)
    return out


class Config:
    """Loaded document: top-level parameters plus named experiments."""

    def __init__(self, doc: dict | None = None):
        doc = copy.deepcopy(doc or {})
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        experiments = doc.pop("experiments", [])
        self.base = deep_merge(DEFAULTS, doc)
        self.experiments: dict[str, dict] = {}
        for exp in BUILTIN_EXPERIMENTS:
            self.experiments[exp["name"]] = copy.deepcopy(exp)
        seen = set()
        if not isinstance(experiments, list):
            raise ConfigError("'experiments' must be a list")
        for exp in experiments:
            if not isinstance(exp, dict) or "name" not in exp:
                raise ConfigError("each experiment needs a 'name'")
            name = exp["name"]
            if name in seen:
                raise ConfigError(f"duplicate experiment name {name!r}")
            seen.add(name)
            kind = exp.get("kind", "custom")
            try:
                ExperimentKind(kind)
            except ValueError:
                raise ConfigError(f"experiment {name!r}: unknown kind {kind!r}") from None
            overrides = exp.get("overrides", {})
            self.experiments[name] = {"name": name, "kind": kind, "overrides": overrides}
        for name in self.experiments:
            self.effective(name)  # validate every experiment up front

    @classmethod
    def load(cls, path: str | Path | None) -> "Config":
        if path is None:
            return cls()
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        return cls(doc)

    def kind(self, name: str) -> ExperimentKind:
        return ExperimentKind(self._experiment(name)["kind"])

    def _experiment(self, name: str) -> dict:
        try:
            return self.experiments[name]
        except KeyError:
            raise ConfigError(f"no experiment named {name!r}") from None

    def effective(self, name: str | None = None) -> dict:
        """Defaults, file values and the experiment's overrides merged into one document."""
        if name is None:
            return copy.deepcopy(self.base)
        exp = self._experiment(name)
        return deep_merge(self.base, exp.get("overrides", {}))


def build_delay_params(doc: dict) -> DelayParams:
    d = doc["delays"]
    try:
        return DelayParams(
            transmission_rate_bps=float(d["transmission_rate_mbps"]) * 1e6,
            link_distance_m=float(d["link_distance_m"]),
            propagation_speed_mps=float(d["propagation_speed_mps"]),
            per_message_processing_s=tuple(float(t) / 1e3 for t in d["processing_ms"]),
            d_ru_bbu_s=float(d["d_ru_bbu_ms"]) / 1e3,
            d_ru_cu_s=float(d["d_ru_cu_ms"]) / 1e3,
            queuing_delay_s=float(d["queuing_delay_ms"]) / 1e3,
            f1_budget_s=float(d["f1_budget_ms"]) / 1e3,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"delays: {exc}") from None


def build_stack(doc: dict) -> tuple[OverheadStack, SecurityProtocol]:
    s = doc["stack"]
    ip = {4: IPV4_HEADER, 6: IPV6_HEADER}.get(s["ip_version"])
    if ip is None:
        raise ConfigError(f"stack.ip_version must be 4 or 6, got {s['ip_version']!r}")
    try:
        stack = OverheadStack(s["f1ap_bytes"], s["pdcp_bytes"], s["sctp_bytes"], ip,
                              s["ethernet_bytes"], s["phy_bytes"], bool(s["sctp_padding"]))
        return stack, SecurityProtocol.of(s["security"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"stack: {exc}") from None


def architecture(doc: dict) -> Architecture:
    try:
        return Architecture(doc["architecture"])
    except ValueError:
        raise ConfigError(f"unknown architecture {doc['architecture']!r}") from None


def build_sim_config(doc: dict) -> SimConfig:
    arch = architecture(doc)
    params = build_delay_params(doc)
    try:
        mu = service_rate(params, arch)
        ctl = dict(doc["controller"])
        profile = StormProfile(**doc["profile"])
        res = dict(doc["resilience"])
        weights = ResilienceWeights(res["w1"], res["w2"], res["w3"], float(res["delta_t_des_ms"]) / 1e3)
        controller = ControllerConfig(ctl["kind"], int(ctl["fixed_c"]), float(ctl["v"]), float(ctl["w"]),
                                      int(ctl["c_max"]))
        first_c = controller.fixed_c if controller.kind.value == "fixed" else 1
        return SimConfig(
            profile=profile,
            service=ServiceModel(mu, first_c, arch),
            controller=controller,
            utility=UtilityParams(**doc["utility"]),
            resilience=weights,
            step_s=float(doc["step_ms"]) / 1e3,
            seed=int(doc["seed"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
