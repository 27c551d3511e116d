import numpy as np
import pytest

from mpa_topo.powerlaw import (
    FitMethod,
    InsufficientTail,
    approximate_mle,
    fit_power_law,
)

from oracles import sample_discrete_power_law


@pytest.fixture(scope="module")
def samples():
    rng = np.random.default_rng(2024)
    return {g: sample_discrete_power_law(g, 100_000, 5, rng) for g in (2.1, 2.5, 3.0)}


def test_oracle_sampler_is_a_power_law():
    rng = np.random.default_rng(0)
    x = sample_discrete_power_law(2.5, 200_000, 1, rng)
    assert x.min() == 1
    # P(1) = 1 / zeta(2.5)
    assert np.mean(x == 1) == pytest.approx(0.7454, abs=0.005)


@pytest.mark.parametrize("gamma", [2.1, 2.5, 3.0])
def test_mle_recovers_exponent_at_known_cutoff(samples, gamma):
    fit = fit_power_law(samples[gamma], k_min=5)
    assert fit.gamma_hat == pytest.approx(gamma, abs=0.05)
    assert fit.n_tail == 100_000
    assert fit.method is FitMethod.DISCRETE_MLE


def test_mle_with_ks_scan(samples):
    fit = fit_power_law(samples[2.5])
    assert 2.45 <= fit.gamma_hat <= 2.55
    assert fit.k_min >= 5
    assert fit.ks_distance is not None


def test_regression_agrees_with_mle(samples):
    for gamma in (2.1, 2.5, 3.0):
        mle = fit_power_law(samples[gamma], k_min=5)
        reg = fit_power_law(samples[gamma], k_min=5, method="CcdfRegression")
        assert abs(mle.gamma_hat - reg.gamma_hat) <= 0.2


def test_approximation_is_close_for_large_cutoff():
    rng = np.random.default_rng(1)
    x = sample_discrete_power_law(2.5, 100_000, 20, rng)
    assert approximate_mle(x, 20) == pytest.approx(2.5, abs=0.05)


def test_degenerate_samples():
    with pytest.raises(InsufficientTail):
        fit_power_law([4] * 50)
    with pytest.raises(InsufficientTail):
        fit_power_law([1, 2, 3])
    with pytest.raises(InsufficientTail):
        fit_power_law(list(range(1, 30)), k_min=25)


def test_non_integer_samples_rejected():
    with pytest.raises(ValueError):
        fit_power_law([1.5] * 20)


def test_fit_invariants(samples):
    fit = fit_power_law(samples[2.1][:5000])
    assert fit.gamma_hat > 1
    assert fit.n_tail >= 10
    assert fit.to_dict()["method"] == "DiscreteMLE"
