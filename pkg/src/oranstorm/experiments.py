"""Runners for the named experiment kinds.

Every runner takes an effective config document and returns an
:class:`ExperimentResult` holding CSV-ready rows and a JSON-ready summary.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Callable

from . import config as cfgmod
from .config import Config, ConfigError, ExperimentKind
from .protocol_delay import (
    ATTACHMENT_SEQUENCE,
    Bound,
    Security,
    SecurityProtocol,
    f1_delay_components,
    transmission_delay,
    wire_size,
)
from .queueing import Architecture, UnstableQueueError, mm1_metrics, service_rate
from .sim import TRACE_COLUMNS, SimConfig, SimTrace, analyze, run


@dataclass
class ExperimentResult:
    name: str
    kind: ExperimentKind
    columns: tuple[str, ...]
    rows: list[tuple]
    summary: dict[str, Any]
    effective: dict[str, Any] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "kind": self.kind.value, "summary": self.summary,
                "effective_config": self.effective}


def _fmt(value):
    if isinstance(value, float):
        return "" if math.isnan(value) else f"{value:.12g}"
    return "" if value is None else value


def _q(x: float, digits: int | None) -> float:
    return x if digits is None else round(x, digits)


def _arch_params(doc):
    params = cfgmod.build_delay_params(doc)
    return params, {a: service_rate(params, a) for a in Architecture}


def mm1_row(lam: float, mu: float, digits: int | None = None) -> dict[str, Any]:
    """M/M/1 metrics at an arrival rate; ``digits`` rounds mu and rho before deriving the rest."""
    mu = _q(mu, digits)
    lam = _q(lam, digits)
    try:
        m = mm1_metrics(lam, mu)
    except UnstableQueueError:
        return {"mu": mu, "lambda": lam, "rho": lam / mu, "Ls": None, "W_ms": None, "stable": False}
    rho = _q(m.utilization, digits)
    return {"mu": mu, "lambda": lam, "rho": rho, "Ls": rho / (1 - rho), "W_ms": 1e3 / (mu - lam),
            "stable": True}


def run_table5(name, doc) -> ExperimentResult:
    an = doc["analysis"]
    digits = an["round_intermediates"]
    _, mus = _arch_params(doc)
    rows, out = [], {}
    for arch in Architecture:
        mu = _q(mus[arch], digits)
        out[arch.value] = []
        for rho in an["rhos"]:
            r = mm1_row(rho * mu, mu, digits)
            r["rho"] = rho
            r["Ls"] = rho / (1 - rho)
            out[arch.value].append(r)
            rows.append((arch.value, r["mu"], rho, r["lambda"], r["Ls"], r["W_ms"]))
    return ExperimentResult(name, ExperimentKind.TABLE5, ("architecture", "mu", "rho", "lambda", "Ls", "W_ms"),
                            rows, {"rows": out})


def run_table6(name, doc) -> ExperimentResult:
    an = doc["analysis"]
    digits = an["round_intermediates"]
    base = cfgmod.build_delay_params(doc)
    lam = float(an["fixed_lambda"])
    rows, out = [], []
    for total_ms in an["proc_totals_ms"]:
        params = _split_processing(base, total_ms)
        entry = {"proc_ms": total_ms}
        row = [total_ms]
        for arch in Architecture:
            r = mm1_row(lam, service_rate(params, arch), digits)
            entry[arch.value] = r
            row += [r["mu"], r["Ls"], r["W_ms"]]
        out.append(entry)
        rows.append(tuple(row))
    cols = ("proc_ms", "mu_monolithic", "Ls_monolithic", "W_ms_monolithic",
            "mu_open_ran", "Ls_open_ran", "W_ms_open_ran")
    return ExperimentResult(name, ExperimentKind.TABLE6, cols, rows, {"lambda": lam, "rows": out})


def _split_processing(params, total_ms):
    m = params.messages
    return replace(params, per_message_processing_s=(float(total_ms) / 1e3 / m,) * m)


def run_fig4(name, doc) -> ExperimentResult:
    rows = []
    stack, _ = cfgmod.build_stack(doc)
    for rate in doc["analysis"]["rates_mbps"]:
        for msg in ATTACHMENT_SEQUENCE:
            for kind in (Security.TLS, Security.IPSEC):
                sec = SecurityProtocol.of(kind)
                lo = wire_size(msg, stack, sec, Bound.MIN)
                hi = wire_size(msg, stack, sec, Bound.MAX)
                rows.append((float(rate), msg.name.value, kind.value, lo, hi,
                             transmission_delay(lo, rate * 1e6), transmission_delay(hi, rate * 1e6)))
    cols = ("rate_mbps", "message", "security", "size_min", "size_max", "dt_min_s", "dt_max_s")
    return ExperimentResult(name, ExperimentKind.FIG4, cols, rows, {"points": len(rows)})


def run_fig5(name, doc) -> ExperimentResult:
    _, mus = _arch_params(doc)
    rows = []
    for arch in Architecture:
        for rho in doc["analysis"]["rho_grid"]:
            r = mm1_row(rho * mus[arch], mus[arch])
            rows.append((arch.value, mus[arch], rho, r["lambda"], r["Ls"], r["W_ms"]))
    return ExperimentResult(name, ExperimentKind.FIG5, ("architecture", "mu", "rho", "lambda", "Ls", "W_ms"),
                            rows, {"mu": {a.value: m for a, m in mus.items()}})


def storm_stats(trace: SimTrace, config: SimConfig) -> dict[str, Any]:
    q = trace.queue_len
    end = config.profile.storm_end
    drained = next((int(t) for t in range(end, len(trace)) if q[t] == 0.0), None)
    return {
        "mu": trace.mu,
        "architecture": trace.architecture.value,
        "peak_queue_len": float(q.max()),
        "peak_wait_s": float(trace.wait_s.max()),
        "drained_at": drained,
        "max_servers": int(trace.c.max()),
        "trace_sha256": trace.digest(),
    }


def report_dict(report) -> dict[str, Any]:
    return asdict(report)


def run_custom(name, doc) -> tuple[ExperimentResult, SimTrace]:
    sim_cfg = cfgmod.build_sim_config(doc)
    trace = run(sim_cfg)
    report = analyze(trace, sim_cfg)
    summary = {"resilience": report_dict(report), "storm": storm_stats(trace, sim_cfg),
               "config_hash": trace.config_hash}
    return ExperimentResult(name, ExperimentKind.CUSTOM, TRACE_COLUMNS, list(trace.rows()), summary), trace


def run_storm_figs(name, doc) -> ExperimentResult:
    members = []
    for arch in Architecture:
        members.append((f"{arch.value}_c1", {"architecture": arch.value,
                                             "controller": {"kind": "fixed", "fixed_c": 1}}))
    for c in doc["analysis"]["storm_servers"]:
        members.append((f"open_ran_c{c}", {"architecture": "open_ran",
                                           "controller": {"kind": "fixed", "fixed_c": c,
                                                          "c_max": max(c, doc["controller"]["c_max"])}}))
    rows, out = [], {}
    for run_name, override in members:
        if run_name in out:
            continue
        res, _ = run_custom(run_name, cfgmod.deep_merge(doc, override))
        out[run_name] = res.summary["storm"]
        rows += [(run_name,) + r for r in res.rows]
    return ExperimentResult(name, ExperimentKind.STORM_FIGS, ("run",) + TRACE_COLUMNS, rows, {"runs": out})


def compare_results(results: list[ExperimentResult]) -> list[dict[str, Any]]:
    scored = [{"name": r.name, "p": r.summary["resilience"]["p"],
               "controller": r.effective.get("controller")} for r in results]
    return sorted(scored, key=lambda s: (-s["p"], s["name"]))


def run_table7(name, doc, config: Config) -> ExperimentResult:
    members = doc["analysis"]["members"]
    if not members:
        raise ConfigError(f"{name}: no member experiments listed")
    results = [run_experiment(config, m) for m in members]
    for r in results:
        if r.kind is not ExperimentKind.CUSTOM:
            raise ConfigError(f"{name}: member {r.name!r} is not a simulation experiment")
    ranking = compare_results(results)
    rows = [(r.name, r.summary["resilience"]["p"]) for r in results]
    return ExperimentResult(name, ExperimentKind.TABLE7, ("run", "p"), rows,
                            {"scores": {r.name: r.summary["resilience"] for r in results}, "ranking": ranking})


_RUNNERS: dict[ExperimentKind, Callable] = {
    ExperimentKind.TABLE5: run_table5,
    ExperimentKind.TABLE6: run_table6,
    ExperimentKind.FIG4: run_fig4,
    ExperimentKind.FIG5: run_fig5,
    ExperimentKind.STORM_FIGS: run_storm_figs,
}


def run_document(name: str, kind: ExperimentKind, doc: dict, config: Config | None = None) -> ExperimentResult:
    if kind is ExperimentKind.CUSTOM:
        result, _ = run_custom(name, doc)
    elif kind is ExperimentKind.TABLE7:
        result = run_table7(name, doc, config or Config())
    else:
        result = _RUNNERS[kind](name, doc)
    result.effective = doc
    return result


def run_experiment(config: Config, name: str) -> ExperimentResult:
    return run_document(name, config.kind(name), config.effective(name), config)


SWEEP_PARAMETERS = ("transmission_rate", "rho", "proc_time_total", "servers", "V", "W")


def sweep(doc: dict, parameter: str, values: list[float]) -> ExperimentResult:
    """One summary row per value of ``parameter``, everything else from ``doc``."""
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}")
    if not values:
        raise ConfigError("sweep needs at least one value")
    arch = cfgmod.architecture(doc)
    rows, cols = [], None
    for value in values:
        if parameter == "transmission_rate":
            d = cfgmod.deep_merge(doc, {"delays": {"transmission_rate_mbps": value}})
            params = cfgmod.build_delay_params(d)
            stack, sec = cfgmod.build_stack(d)
            comps = f1_delay_components(ATTACHMENT_SEQUENCE, params, stack, sec, Bound.MAX)
            cols = ("transmission_rate_mbps", "transmission_s", "propagation_s", "processing_s", "total_f1_s")
            rows.append((value, math.fsum(c.transmission_s for c in comps),
                         math.fsum(c.propagation_s for c in comps),
                         math.fsum(c.processing_s for c in comps), math.fsum(c.total_s for c in comps)))
        elif parameter == "rho":
            mu = service_rate(cfgmod.build_delay_params(doc), arch)
            r = mm1_row(value * mu, mu)
            cols = ("rho", "mu", "lambda", "Ls", "W_ms")
            rows.append((value, mu, r["lambda"], value / (1 - value) if r["stable"] else None, r["W_ms"]))
        elif parameter == "proc_time_total":
            params = _split_processing(cfgmod.build_delay_params(doc), value)
            mu = service_rate(params, arch)
            r = mm1_row(float(doc["analysis"]["fixed_lambda"]), mu)
            cols = ("proc_time_total_ms", "mu", "lambda", "Ls", "W_ms")
            rows.append((value, mu, r["lambda"], r["Ls"], r["W_ms"]))
        else:
            if parameter == "servers":
                c = int(value)
                if c != value:
                    raise ConfigError(f"servers must be integers, got {value}")
                ctl = {"kind": "fixed", "fixed_c": c, "c_max": max(c, doc["controller"]["c_max"])}
            else:
                ctl = {"kind": "lyapunov", parameter.lower(): float(value)}
            res, trace = run_custom(f"{parameter}={value}", cfgmod.deep_merge(doc, {"controller": ctl}))
            st, rep = res.summary["storm"], res.summary["resilience"]
            cols = (parameter, "p", "peak_queue_len", "peak_wait_s", "drained_at", "recovered", "trace_sha256")
            rows.append((value, rep["p"], st["peak_queue_len"], st["peak_wait_s"], st["drained_at"],
                         rep["recovered"], st["trace_sha256"]))
    return ExperimentResult(f"sweep_{parameter}", ExperimentKind.CUSTOM, cols, rows,
                            {"parameter": parameter, "values": list(values),
                             "rows": [dict(zip(cols, r)) for r in rows]}, doc)
