import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oranstorm.resilience import (
    Phases,
    ResilienceWeights,
    UtilityParams,
    desired_utility,
    detect_phases,
    recovery_time_score,
    resilience_score,
    utility,
)
from oranstorm.scenario import StormProfile

UP = UtilityParams()
MU = 28.37


def ref_utility(lam, q, c, mu, p=UP):
    a = 1 / (1 + math.exp(p.k_a * (lam - c * mu * p.m_frac_a)))
    b = 1 / (1 + math.exp(p.k_b * (q - p.l_q_max * p.m_frac_b)))
    return p.w_a * a + p.w_b * b


def test_midpoint_is_half():
    m_a = 3 * MU * UP.m_frac_a
    m_b = UP.l_q_max * UP.m_frac_b
    assert abs(utility(m_a, m_b, 3, MU) - 0.5) <= 1e-12


def test_extremes():
    steep = UtilityParams(k_a=5, k_b=5)
    assert utility(0, 0, 4, MU, steep) == pytest.approx(1, abs=1e-12)
    assert utility(1e9, 1e9, 1, MU) == pytest.approx(0, abs=1e-12)
    assert 0 < utility(1e9, 1e9, 1, MU) or utility(1e9, 1e9, 1, MU) == 0.0


def test_matches_reference_formula():
    for lam, q, c in [(20, 0, 1), (200, 300, 6), (150, 40, 8)]:
        assert utility(lam, q, c, MU) == pytest.approx(ref_utility(lam, q, c, MU), rel=1e-14)


def test_desired_utility_baseline():
    assert desired_utility(20, 1, MU) == pytest.approx(ref_utility(20, 0, 1, MU), rel=1e-14)
    m_a = MU * UP.m_frac_a
    expected = 0.5 * UP.w_a + UP.w_b / (1 + math.exp(-UP.k_b * UP.l_q_max * UP.m_frac_b))
    assert desired_utility(m_a, 1, MU) == pytest.approx(expected, rel=1e-14)


ordered = st.tuples(st.floats(0, 400), st.floats(0, 400)).map(sorted)


@given(ordered, st.floats(0, 1000), st.integers(1, 10))
def test_non_increasing_in_lambda(lams, q, c):
    lo, hi = lams
    assert utility(hi, q, c, MU) <= utility(lo, q, c, MU)


@given(st.floats(0, 400), st.tuples(st.floats(0, 2000), st.floats(0, 2000)).map(sorted), st.integers(1, 10))
def test_non_increasing_in_queue(lam, qs, c):
    lo, hi = qs
    assert utility(lam, hi, c, MU) <= utility(lam, lo, c, MU)


@given(st.floats(0, 400), st.floats(0, 2000), st.integers(1, 9))
def test_more_servers_never_hurt(lam, q, c):
    assert utility(lam, q, c + 1, MU) >= utility(lam, q, c, MU)


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.integers(1, 20))
def test_utility_bounded(lam, q, c):
    u = utility(lam, q, c, MU)
    assert 0 <= u <= 1


PROFILE = StormProfile(horizon=200)


def test_no_disruption_phases():
    u = np.full(200, 0.8)
    ph = detect_phases(u, 0.8, PROFILE)
    assert ph.t0 == ph.td == ph.tr == PROFILE.t_start
    assert not ph.disrupted
    rep = resilience_score(u, 0.8, ph)
    assert rep.p == 1.0
    assert rep.absorption_ratio == rep.adaptation_ratio == rep.t_rec_score == 1.0


def test_phases_with_late_recovery():
    u = np.full(200, 0.8)
    u[35:150] = 0.2
    ph = detect_phases(u, 0.8, PROFILE)
    assert ph.t0 == 35
    assert ph.td == PROFILE.storm_end - 1
    assert ph.tr == 150
    assert ph.recovered


def test_recovery_needs_hold_window():
    u = np.full(200, 0.8)
    u[35:150] = 0.2
    u[120:123] = 0.8  # three good steps are not enough
    assert detect_phases(u, 0.8, PROFILE).tr == 150


def test_non_recovering_run():
    u = np.full(200, 0.8)
    u[35:] = 0.1
    ph = detect_phases(u, 0.8, PROFILE)
    assert ph.tr == 199
    assert not ph.recovered


def test_empty_trace_rejected():
    with pytest.raises(ValueError):
        detect_phases([], 0.5, PROFILE)


def test_score_by_hand():
    u = np.full(20, 1.0)
    u[2:6] = 0.5
    ph = Phases(2, 5, 8)
    w = ResilienceWeights(0.4, 0.4, 0.2, delta_t_des_s=3.0)
    rep = resilience_score(u, 1.0, ph, w)
    # [2, 5]: all 0.5 -> 1.5 / 3; [5, 8]: 0.5, 1, 1, 1 -> 2.75 / 3
    assert rep.absorption_ratio == pytest.approx(0.5)
    assert rep.adaptation_ratio == pytest.approx(2.75 / 3)
    assert rep.t_rec_score == pytest.approx(3 / 6)
    assert rep.p == pytest.approx(0.4 * 0.5 + 0.4 * 2.75 / 3 + 0.2 * 0.5)


def test_zero_length_adaptation_counts_as_full():
    u = np.full(10, 0.5)
    rep = resilience_score(u, 1.0, Phases(2, 5, 5), ResilienceWeights(delta_t_des_s=100))
    assert rep.adaptation_ratio == 1.0


def test_recovery_time_score():
    assert recovery_time_score(60, 120) == 1.0
    assert recovery_time_score(120, 120) == 1.0
    assert recovery_time_score(240, 120) == 0.5
    xs = [130, 200, 500, 1000]
    scores = [recovery_time_score(x, 120) for x in xs]
    assert all(a > b for a, b in zip(scores, scores[1:]))


traces = st.lists(st.floats(0.0, 1.0), min_size=30, max_size=30)


@given(traces, st.integers(0, 29), st.integers(0, 29), st.integers(0, 29))
def test_score_in_unit_interval(vals, a, b, c):
    t0, td, tr = sorted((a, b, c))
    u = np.array(vals)
    rep = resilience_score(u, 1.0, Phases(t0, td, tr), ResilienceWeights(delta_t_des_s=5))
    assert 0 <= rep.p <= 1


@given(traces, st.floats(0.0, 0.5), st.integers(0, 29), st.integers(0, 29), st.integers(0, 29))
def test_higher_utility_never_scores_lower(vals, bump, a, b, c):
    t0, td, tr = sorted((a, b, c))
    u = np.array(vals) * 0.5
    ph = Phases(t0, td, tr)
    w = ResilienceWeights(delta_t_des_s=5)
    assert resilience_score(u + bump, 1.0, ph, w).p >= resilience_score(u, 1.0, ph, w).p - 1e-12


def test_weights_validated():
    with pytest.raises(ValueError):
        ResilienceWeights(0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        UtilityParams(w_a=0.7, w_b=0.7)
