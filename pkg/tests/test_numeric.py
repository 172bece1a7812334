import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fadingcap.errors import BracketError, IntegrandDomainError, QuadratureError
from fadingcap.models import AlphaEtaMuParams, pdf_snr
from fadingcap.numeric import (cumulative_integral, find_root_bracketed, integrate_interval, integrate_semi_infinite,
                               mc_estimate)


@pytest.mark.parametrize("tol", [1e-6, 1e-8, 1e-10])
@pytest.mark.parametrize("f, lower, exact", [
    (lambda x: np.exp(-x), 0.0, 1.0),
    (lambda x: np.exp(-x), math.log(2), 0.5),
    (lambda x: x * np.exp(-x), 0.0, 1.0),
    (lambda x: np.exp(-x * x / 2) / math.sqrt(2 * math.pi), 1.5, 0.5 * math.erfc(1.5 / math.sqrt(2))),
])
def test_semi_infinite_known_integrals(f, lower, exact, tol):
    res = integrate_semi_infinite(f, lower, tol)
    assert res.value == pytest.approx(exact, rel=tol, abs=1e-12)
    assert res.abs_error_estimate >= 0
    assert res.evaluations >= 1


def test_semi_infinite_density_normalization():
    m = AlphaEtaMuParams(1.0, 1.0, 1.0, 10 ** 1.5)
    res = integrate_semi_infinite(lambda g: pdf_snr(m, g), 0.0, 1e-10, scale=m.mean_snr)
    assert abs(res.value - 1.0) < 1e-8


@given(k=st.integers(0, 6), c=st.floats(0.2, 5.0))
def test_gamma_moments(k, c):
    res = integrate_semi_infinite(lambda x: x ** k * np.exp(-c * x), 0.0, 1e-10, scale=1 / c)
    assert res.value == pytest.approx(math.factorial(k) / c ** (k + 1), rel=1e-9)


def test_rel_tol_range_enforced():
    with pytest.raises(ValueError):
        integrate_semi_infinite(lambda x: np.exp(-x), 0.0, 1e-16)
    with pytest.raises(ValueError):
        integrate_semi_infinite(lambda x: np.exp(-x), 0.0, 0.1)


def test_nan_integrand_is_domain_error():
    with pytest.raises(IntegrandDomainError):
        integrate_semi_infinite(lambda x: np.full_like(x, np.nan), 0.0, 1e-8)


def test_non_convergence_carries_best_estimate():
    # 1/sqrt(x) * sin(1/x) oscillates without end near 0.
    with pytest.raises(QuadratureError) as info:
        integrate_interval(lambda x: np.sin(1 / x) / x ** 1.5, 0.0, 1.0, 1e-12, max_subdivisions=50)
    assert math.isfinite(info.value.error_estimate)


def test_interval_orientation():
    fwd = integrate_interval(np.cos, 0.0, 1.0).value
    back = integrate_interval(np.cos, 1.0, 0.0).value
    assert fwd == pytest.approx(math.sin(1.0), rel=1e-12)
    assert back == -fwd


def test_cumulative_integral_matches_antiderivative():
    pts = np.array([2.0, 0.5, 1.0, 3.0])
    values, err = cumulative_integral(lambda x: np.exp(-x), pts)
    np.testing.assert_allclose(values, 1 - np.exp(-pts), rtol=1e-10)
    assert err >= 0


@pytest.mark.parametrize("f, lo, hi, root", [
    (lambda x: x - 1, 0.0, 2.0, 1.0),
    (lambda x: x * x - 2, 0.0, 2.0, math.sqrt(2)),
])
def test_root_examples(f, lo, hi, root):
    assert find_root_bracketed(f, lo, hi, 1e-12) == pytest.approx(root, abs=1e-11)


def test_root_bracket_error():
    with pytest.raises(BracketError):
        find_root_bracketed(lambda x: x * x + 1, -1.0, 1.0)


@given(shift=st.floats(-5, 5), slope=st.floats(0.1, 10), power=st.integers(1, 3).map(lambda k: 2 * k - 1))
def test_root_lies_at_sign_change(shift, slope, power):
    def f(x):
        return slope * (x - shift) ** power

    x = find_root_bracketed(f, -10.0, 10.0, 1e-12)
    assert abs(x - shift) <= 1e-9 * max(1.0, abs(shift)) + 1e-6


def test_mc_constant_statistic():
    est = mc_estimate(lambda n, s: np.random.default_rng(s).random(n), lambda x: np.ones_like(x), 1000)
    assert est.mean == 1.0 and est.std_error == 0.0


def test_mc_reproducible_and_requires_samples():
    def sampler(n, seed):
        return np.random.Generator(np.random.Philox(seed)).standard_normal(n)

    a = mc_estimate(sampler, lambda x: x * x, 5000, seed=3)
    b = mc_estimate(sampler, lambda x: x * x, 5000, seed=3)
    assert a.mean == b.mean and a.seed == 3 and a.samples == 5000
    with pytest.raises(ValueError):
        mc_estimate(sampler, lambda x: x, 10)


def test_mc_std_error_scaling():
    def sampler(n, seed):
        return np.random.Generator(np.random.Philox(seed)).random(n)

    errs = [mc_estimate(sampler, lambda x: x, n, seed=1).std_error for n in (10_000, 100_000, 1_000_000)]
    for small, big in zip(errs, errs[1:]):
        assert small / big == pytest.approx(math.sqrt(10), rel=0.2)
