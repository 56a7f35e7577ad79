import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oranstorm.controller import ControllerConfig, ControllerKind, decide_servers, drift, lyapunov_objective
from oranstorm.queueing import QueueState
from oranstorm.resilience import UtilityParams

MU = 28.37
UP = UtilityParams()


def brute_objective(c, lam, q, mu, v, w, p=UP):
    net = lam - c * mu
    u = p.w_a / (1 + math.exp(p.k_a * (lam - c * mu * p.m_frac_a))) + \
        p.w_b / (1 + math.exp(p.k_b * (q - p.l_q_max * p.m_frac_b)))
    return q * net + 0.5 * net ** 2 - v * u + w * c


def brute_argmin(lam, q, mu, v, w, c_max):
    values = [brute_objective(c, lam, q, mu, v, w) for c in range(1, c_max + 1)]
    return values.index(min(values)) + 1


def test_objective_matches_reference():
    cfg = ControllerConfig.adaptive(3.0, 2.0)
    for c in range(1, 11):
        assert lyapunov_objective(c, 150, 40, MU, cfg) == pytest.approx(brute_objective(c, 150, 40, MU, 3, 2))


def test_pure_drift_tracks_arrivals():
    cfg = ControllerConfig.adaptive(0, 0)
    # 100 / 28.37 = 3.52 -> c = 4 is nearest
    assert decide_servers(QueueState(), 100, MU, cfg) == 4
    assert decide_servers(QueueState(), 5 * MU, MU, cfg) == 5


def test_large_queue_pushes_to_c_max():
    cfg = ControllerConfig.adaptive(1, 1)
    assert brute_argmin(200, 1e4, MU, 1, 1, 10) == 10
    assert decide_servers(QueueState(queue_len=1e4), 200, MU, cfg) == 10


def test_idle_with_expensive_servers():
    cfg = ControllerConfig.adaptive(1, 1000)
    assert brute_argmin(0, 0, MU, 1, 1000, 10) == 1
    assert decide_servers(QueueState(), 0, MU, cfg) == 1


def test_fixed_controller():
    cfg = ControllerConfig.fixed(4, 10)
    for lam, q in [(0, 0), (200, 1e4), (50, 10)]:
        assert decide_servers(QueueState(queue_len=q), lam, MU, cfg) == 4


def test_storm_peak_with_priority_on_utility():
    cfg = ControllerConfig.adaptive(1000, 1)
    c = decide_servers(QueueState(queue_len=50.0), 200, MU, cfg)
    assert c == brute_argmin(200, 50, MU, 1000, 1, 10)
    assert c >= 8
    assert c * MU >= 200


def test_baseline_is_small():
    cfg = ControllerConfig.adaptive(1, 1)
    assert decide_servers(QueueState(), 20, MU, cfg) in (1, 2)


def test_ties_go_to_smaller_c():
    # with only the quadratic term, lambda halfway between 1*mu and 2*mu ties exactly
    cfg = ControllerConfig.adaptive(0, 0)
    assert decide_servers(QueueState(), 1.5 * 2.0, 2.0, cfg) == 1


def test_config_validation():
    with pytest.raises(ValueError):
        ControllerConfig(ControllerKind.FIXED, fixed_c=12, c_max=10)
    with pytest.raises(ValueError):
        ControllerConfig.adaptive(-1, 0)


def test_drift_examples():
    assert drift(0, 0) == 0
    assert drift(10, 0) == 50


@given(st.floats(0, 1e4), st.floats(0, 400), st.integers(1, 10))
def test_drift_expansion(q, lam, c):
    net = lam - c * MU
    nxt = q + net
    if nxt <= 0:
        return
    assert drift(nxt, q) == pytest.approx(q * net + 0.5 * net * net, rel=1e-9, abs=1e-6)


grid = st.tuples(st.floats(0, 400), st.floats(0, 5000), st.floats(0, 2000), st.floats(0, 2000))


@given(grid, st.integers(1, 12))
def test_enumeration_optimal(point, c_max):
    lam, q, v, w = point
    cfg = ControllerConfig.adaptive(v, w, c_max)
    c = decide_servers(QueueState(queue_len=q), lam, MU, cfg)
    assert 1 <= c <= c_max
    best = min(lyapunov_objective(k, lam, q, MU, cfg) for k in range(1, c_max + 1))
    assert lyapunov_objective(c, lam, q, MU, cfg) == best


@given(grid, st.floats(0, 5000))
def test_monotone_in_queue(point, extra):
    lam, q, v, w = point
    cfg = ControllerConfig.adaptive(v, w)
    assert decide_servers(QueueState(queue_len=q + extra), lam, MU, cfg) >= decide_servers(QueueState(queue_len=q), lam, MU, cfg)


@given(grid, st.floats(0, 2000))
def test_monotone_in_weights(point, extra):
    lam, q, v, w = point
    s = QueueState(queue_len=q)
    base = decide_servers(s, lam, MU, ControllerConfig.adaptive(v, w))
    assert decide_servers(s, lam, MU, ControllerConfig.adaptive(v, w + extra)) <= base
    assert decide_servers(s, lam, MU, ControllerConfig.adaptive(v + extra, w)) >= base
