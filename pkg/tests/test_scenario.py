import pytest
from hypothesis import given
from hypothesis import strategies as st

from oranstorm.scenario import StormProfile, arrival_rate, constant_profile, offered_load

DEFAULT = StormProfile()


def test_default_phases():
    assert arrival_rate(DEFAULT, 0) == 20
    assert arrival_rate(DEFAULT, DEFAULT.t_start - 1) == 20
    assert arrival_rate(DEFAULT, DEFAULT.plateau_start) == 200
    assert arrival_rate(DEFAULT, DEFAULT.ramp_down_start - 1) == 200
    assert arrival_rate(DEFAULT, DEFAULT.storm_end) == 20
    assert arrival_rate(DEFAULT, DEFAULT.horizon - 1) == 20


def test_ramp_is_linear():
    # ramp-up of 10 steps climbs 18 UEs/s per step
    assert arrival_rate(DEFAULT, 30) == pytest.approx(38)
    assert arrival_rate(DEFAULT, 34) == pytest.approx(110)
    assert arrival_rate(DEFAULT, 100) == pytest.approx(182)


def test_zero_ramp_is_a_step():
    p = StormProfile(ramp_up_steps=0, ramp_down_steps=0)
    assert arrival_rate(p, p.t_start - 1) == 20
    assert arrival_rate(p, p.t_start) == 200
    assert arrival_rate(p, p.storm_end) == 20


def test_out_of_horizon():
    with pytest.raises(IndexError):
        arrival_rate(DEFAULT, DEFAULT.horizon)
    with pytest.raises(IndexError):
        arrival_rate(DEFAULT, -1)


def test_invalid_profiles():
    with pytest.raises(ValueError):
        StormProfile(lambda_storm=10)
    with pytest.raises(ValueError):
        StormProfile(horizon=100)


def test_constant_profile():
    p = constant_profile(15, 100)
    assert {arrival_rate(p, t) for t in range(100)} == {15}
    p = constant_profile(0, 10)
    assert {arrival_rate(p, t) for t in range(10)} == {0}
    assert sum(arrival_rate(constant_profile(15, 100), t) for t in range(100)) == 15 * 100


profiles = st.builds(
    StormProfile,
    lambda_normal=st.floats(0, 50),
    lambda_storm=st.floats(60, 500),
    t_start=st.integers(0, 50),
    ramp_up_steps=st.integers(0, 20),
    steady_steps=st.integers(1, 80),
    ramp_down_steps=st.integers(0, 20),
    horizon=st.just(200),
)


@given(profiles)
def test_offered_load_matches_trapezoid(p):
    total = sum(arrival_rate(p, t) for t in range(p.horizon))
    # plateau plus two trapezoids, each with one endpoint on the plateau
    lo, hi = p.lambda_normal, p.lambda_storm
    closed = lo * p.horizon + (hi - lo) * (p.steady_steps + (p.ramp_up_steps + 1) / 2
                                          + max(p.ramp_down_steps - 1, 0) / 2)
    if p.ramp_up_steps == 0:
        closed -= (hi - lo) / 2
    assert total == pytest.approx(closed, rel=1e-9)
    assert offered_load(p) == pytest.approx(closed, rel=1e-9)


@given(profiles)
def test_rates_non_negative_and_continuous(p):
    rates = p.rates()
    assert (rates >= 0).all()
    if p.ramp_up_steps:
        assert rates[p.plateau_start - 1] == pytest.approx(p.lambda_storm)
    if p.ramp_down_steps:
        assert rates[p.storm_end - 1] == pytest.approx(p.lambda_normal)
