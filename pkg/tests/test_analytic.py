import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpa_topo import analytic
from mpa_topo.analytic import (
    InvalidParams,
    InvalidTime,
    MpaParams,
    UnsupportedRegime,
    alpha,
    beta,
    derive_peering_rate,
    gamma,
    mean_degree_trajectory,
    peer_trajectory,
    predict,
    provider_ccdf,
    two_class_exponent,
    two_class_trajectory,
)

from oracles import rk4_log_time

REFERENCE = MpaParams(rho=7 / 3, nu=1, c=0.704, m=1.86, mu=0)
CLASSIC = MpaParams(rho=0, nu=0, c=0, m=1, mu=0)
TWO_CLASS = MpaParams(rho=7 / 3, nu=0, c=0, m=1, mu=0)

_rates = dict(rho=st.floats(0, 20), nu=st.floats(0, 10), c=st.floats(0, 10), mu=st.floats(0, 0.99))
params_st = st.one_of(
    st.builds(MpaParams, m=st.floats(1, 10), **_rates),
    st.builds(MpaParams, m=st.just(1.0), **_rates),
)


def test_default_params_are_the_reproduction_config():
    assert MpaParams() == REFERENCE


@pytest.mark.parametrize(
    "kwargs",
    [{"rho": -1}, {"nu": -0.1}, {"m": 0.5}, {"mu": 1.0}, {"c": math.nan}, {"rho": math.inf}],
)
def test_invalid_params(kwargs):
    with pytest.raises(InvalidParams):
        MpaParams(**kwargs)


def test_alpha_examples():
    assert alpha(REFERENCE) == pytest.approx(0.8974, abs=1e-4)
    assert alpha(REFERENCE) == pytest.approx(1 / (2.114 - 1), abs=5e-4)
    assert alpha(CLASSIC) == 0.5
    assert alpha(TWO_CLASS) == pytest.approx(10 / 13, rel=1e-12)


def test_gamma_examples():
    assert gamma(REFERENCE) == pytest.approx(2.114, abs=1e-3)
    assert gamma(CLASSIC) == pytest.approx(3)
    assert gamma(TWO_CLASS) == pytest.approx(2.3)


def test_two_class_exponent():
    assert two_class_exponent(7 / 3) == pytest.approx(2.3)
    assert two_class_exponent(0) == 3
    assert two_class_exponent(math.inf) == 2
    assert two_class_exponent(1e12) == pytest.approx(2)


def test_trajectory_examples():
    assert mean_degree_trajectory(5, 5, REFERENCE) == pytest.approx(1)
    assert mean_degree_trajectory(1, 4, TWO_CLASS) == pytest.approx(4 ** (10 / 13))
    assert 4 ** (10 / 13) == pytest.approx(2.905, abs=1e-3)
    p = MpaParams(mu=0.1)
    assert mean_degree_trajectory(3, 3, p) == pytest.approx(1 + 0.1 / alpha(p))


def test_two_class_trajectory_matches_full_model():
    for s in (1, 10, 250):
        assert two_class_trajectory(s, 1000, 7 / 3) == pytest.approx(
            mean_degree_trajectory(s, 1000, TWO_CLASS), rel=1e-12
        )


def test_invalid_times():
    with pytest.raises(InvalidTime):
        mean_degree_trajectory(2, 1, REFERENCE)
    with pytest.raises(InvalidTime):
        mean_degree_trajectory(0, 1, REFERENCE)


def test_peer_trajectory():
    assert peer_trajectory(1, 100, MpaParams(c=0)) == 0
    assert peer_trajectory(7, 7, REFERENCE) == pytest.approx(beta(REFERENCE) / alpha(REFERENCE))
    assert beta(REFERENCE) / alpha(REFERENCE) == pytest.approx(0.1610, abs=1e-4)
    a = alpha(REFERENCE)
    assert peer_trajectory(1, 20, REFERENCE) == pytest.approx(2**a * peer_trajectory(1, 10, REFERENCE))
    with pytest.raises(UnsupportedRegime):
        peer_trajectory(1, 2, MpaParams(mu=0.05))


def test_provider_law():
    assert provider_ccdf(0, 1) == 1
    nu = 1 / 0.7
    slope = math.log(provider_ccdf(3, nu)) - math.log(provider_ccdf(2, nu))
    assert slope == pytest.approx(-0.7)
    assert analytic.provider_mean(nu) == pytest.approx(2.4, abs=0.03)
    assert analytic.provider_mean(1) == 2


def test_derive_peering_rate():
    assert derive_peering_rate(0.1, 1, 1.86, 7 / 3) == pytest.approx(0.704, abs=1e-3)
    assert derive_peering_rate(0, 1, 1.86, 7 / 3) == 0
    assert derive_peering_rate(0.5, 1, 1.86, 7 / 3) == pytest.approx(1 + 1 + 1.86 * 7 / 3)
    with pytest.raises(InvalidParams):
        derive_peering_rate(1.0, 1, 1, 1)


def test_predict():
    pred = predict(REFERENCE)
    assert pred.gamma == pytest.approx(2.114, abs=1e-3)
    assert pred.mean_total_degree == pytest.approx(2 * (1 + 1 + 0.704 + 1.86 * 7 / 3) / (1 + 7 / 3))
    assert pred.mean_total_degree == pytest.approx(4.23, abs=0.01)
    classic = predict(CLASSIC)
    assert classic.gamma == pytest.approx(3)
    assert classic.mean_total_degree == 2


@settings(max_examples=300)
@given(params_st)
def test_gamma_alpha_identity(p):
    assert gamma(p) == pytest.approx(1 / alpha(p) + 1, abs=1e-12)
    if p.mu == 0:
        assert 2 < gamma(p) <= 3
    if p.mu == 0 or p.m == 1:
        explicit = 2 + (1 - p.mu) / (1 + 2 * p.nu + p.m * p.rho + 2 * p.c + p.mu)
        assert gamma(p) == pytest.approx(explicit, abs=1e-12)


@settings(max_examples=200)
@given(params_st, st.floats(0.01, 1), st.floats(0.01, 1), st.floats(1, 1e4))
def test_trajectory_monotone(p, x1, x2, t):
    lo, hi = sorted((x1, x2))
    # later birth -> smaller degree
    assert mean_degree_trajectory(hi * t, t, p) <= mean_degree_trajectory(lo * t, t, p) * (1 + 1e-12)
    # later observation -> larger degree
    s = lo * t
    assert mean_degree_trajectory(s, t, p) <= mean_degree_trajectory(s, t / hi, p) * (1 + 1e-12)


@given(st.floats(0, 50), st.floats(0, 50), st.floats(0.01, 20))
def test_provider_ccdf_monotone(p1, p2, nu):
    lo, hi = sorted((p1, p2))
    assert provider_ccdf(lo, nu) >= provider_ccdf(hi, nu)


# -- independent numerical oracle ------------------------------------------

RATIOS = [0.01, 0.03, 0.1, 0.25, 0.5, 0.9, 1.0]


@pytest.mark.parametrize("x", RATIOS)
def test_two_class_ode(x):
    t, rho = 1000.0, 7 / 3
    s = x * t
    a = (1 + rho) / (2 + rho)
    y = rk4_log_time(lambda k, t_: a * k / t_, 1.0, s, t)
    assert y == pytest.approx(two_class_trajectory(s, t, rho), rel=1e-6)


@pytest.mark.parametrize("mu", [0.0, 0.05])
@pytest.mark.parametrize("x", RATIOS)
def test_full_model_ode(mu, x):
    p = MpaParams(mu=mu)
    a = alpha(p)
    t = 1000.0
    s = x * t
    # dk/dt = (alpha k - mu) / t, started from the closed form's value at birth
    y = rk4_log_time(lambda k, t_: (a * k - mu) / t_, 1 + mu / a, s, t)
    assert y == pytest.approx(mean_degree_trajectory(s, t, p), rel=1e-6)
