import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fadingcap import specfun
from fadingcap.capacity import log_exp_moment
from fadingcap.errors import DegenerateParametersError, DomainError
from fadingcap.numeric import integrate_semi_infinite

mp.mp.dps = 30


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (0.5, math.log(math.sqrt(math.pi))),
                                         (7.5, math.log(1871.2543057977884))])
def test_ln_gamma_examples(x, expected):
    assert specfun.ln_gamma(x) == pytest.approx(expected, abs=1e-12)


@given(st.floats(1e-3, 150.0))
def test_ln_gamma_against_mpmath(x):
    assert specfun.ln_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-12, abs=1e-13)


@given(st.floats(1e-3, 150.0))
def test_digamma_against_mpmath(x):
    assert specfun.digamma(x) == pytest.approx(float(mp.digamma(x)), rel=1e-10, abs=1e-10)


def test_euler_constant():
    assert specfun.EULER_GAMMA == pytest.approx(float(mp.euler), abs=1e-15)
    assert specfun.digamma(1.0) == pytest.approx(-specfun.EULER_GAMMA, abs=1e-14)


@pytest.mark.parametrize("fn", [specfun.ln_gamma, specfun.digamma, specfun.exp_integral_e1])
def test_nonpositive_arguments_rejected(fn):
    with pytest.raises(DomainError):
        fn(0.0)


@given(n=st.integers(0, 12), x=st.floats(1e-3, 60.0))
def test_upper_incomplete_gamma_against_mpmath(n, x):
    assert specfun.upper_incomplete_gamma(n, x) == pytest.approx(float(mp.gammainc(n, x)), rel=1e-12)


@pytest.mark.parametrize("n", [0, 1, 4])
def test_upper_incomplete_gamma_against_quadrature(n):
    for x in (0.05, 1.0, 6.0):
        quad = integrate_semi_infinite(lambda t: t ** (n - 1) * np.exp(-t), x, 1e-12).value
        assert specfun.upper_incomplete_gamma(n, x) == pytest.approx(quad, rel=1e-10)


def test_upper_incomplete_gamma_domain():
    with pytest.raises(DomainError):
        specfun.upper_incomplete_gamma(1.5, 1.0)
    with pytest.raises(DomainError):
        specfun.upper_incomplete_gamma(2, 0.0)


@given(k=st.integers(0, 8), x=st.floats(1e-6, 80.0))
def test_bessel_half_against_mpmath(k, x):
    assert specfun.bessel_i_half(k, x) == pytest.approx(float(mp.besseli(k + 0.5, x)), rel=1e-12)


@given(k=st.integers(1, 8), x=st.floats(1e-3, 60.0))
def test_bessel_recurrence(k, x):
    nu = k + 0.5
    lhs = specfun.bessel_i_half(k - 1, x) - specfun.bessel_i_half(k + 1, x)
    rhs = 2 * nu / x * specfun.bessel_i_half(k, x)
    assert lhs == pytest.approx(rhs, rel=1e-11)


def test_bessel_domain():
    assert specfun.bessel_i_half(0, 0.0) == 0.0
    with pytest.raises(DomainError):
        specfun.bessel_i_half(0, -1.0)
    with pytest.raises(DomainError):
        specfun.bessel_i_half(0.5, 1.0)


@given(re=st.floats(1.05, 6.0), im=st.floats(-40.0, 40.0))
def test_zeta_against_mpmath(re, im):
    s = complex(re, im)
    assert complex(specfun.riemann_zeta(s)) == pytest.approx(complex(mp.zeta(s)), rel=1e-12)


def test_delta_sequence():
    assert specfun.delta_seq(2, 1.0) == [0.5, 1.0]
    assert specfun.delta_seq(3, 0.0) == [0.0, 1 / 3, 2 / 3]
    with pytest.raises(DomainError):
        specfun.delta_seq(0, 1.0)


def test_spec_validation():
    with pytest.raises(DomainError):
        specfun.MeijerGSpec(1, 0, 0, 1, (), (0.0, 1.0))
    with pytest.raises(DomainError):
        specfun.MeijerGSpec(2, 0, 0, 1, (), (0.0,))


@given(st.floats(0.01, 30.0))
def test_meijer_primitive_exponential(x):
    assert specfun.meijer_g(specfun.EXP_SHAPE, x) == pytest.approx(math.exp(-x), rel=1e-14)
    assert specfun.meijer_g(specfun.EXP_SHAPE, x, shortcut=False) == pytest.approx(math.exp(-x), rel=1e-9)


@given(st.floats(0.01, 50.0))
def test_meijer_primitive_log1p(x):
    assert specfun.meijer_g(specfun.LOG1P_SHAPE, x) == pytest.approx(math.log1p(x), rel=1e-14)
    assert specfun.meijer_g(specfun.LOG1P_SHAPE, x, shortcut=False) == pytest.approx(math.log1p(x), rel=1e-9)


def test_meijer_generic_against_mpmath():
    spec = specfun.MeijerGSpec(1, 2, 2, 2, (1.0, 1.0), (1.0, 1.0))
    assert specfun.meijer_g(spec, 1.0) == pytest.approx(0.5, rel=1e-10)
    for x in (0.2, 3.0):
        assert specfun.meijer_g(spec, x) == pytest.approx(x / (1 + x), rel=1e-10)


@pytest.mark.parametrize("alpha", [1, 2, 3])
@pytest.mark.parametrize("power", [0.5, 1.0, 2.5])
def test_composite_meijer_against_mpmath(alpha, power):
    spec = specfun.log_exp_product_spec(alpha, power)
    for x in (0.05, 2.0):
        ref = mp.meijerg([spec.a_params[:spec.n], spec.a_params[spec.n:]],
                         [spec.b_params[:spec.m], spec.b_params[spec.m:]], x)
        assert specfun.meijer_g(spec, x) == pytest.approx(float(ref), rel=1e-9)


@pytest.mark.parametrize("alpha", [1, 2, 3])
@pytest.mark.parametrize("c, s", [(0.3, 0.5), (1.7, 1.0), (5.0, 3.0), (0.05, 1.5)])
def test_composite_matches_quadrature_route(alpha, c, s):
    quad = integrate_semi_infinite(lambda x: x ** (s - 1) * np.log1p(x) * np.exp(-c * x ** (alpha / 2)), 0.0,
                                   1e-12).value
    assert log_exp_moment(alpha, c, s) == pytest.approx(quad, rel=1e-9)


def test_composite_shape_rejects_non_integer_alpha():
    with pytest.raises(DomainError):
        specfun.log_exp_product_spec(1.5, 1.0)


def test_overlapping_pole_families_are_degenerate():
    spec = specfun.MeijerGSpec(1, 1, 1, 1, (1.0,), (-1.0,))
    with pytest.raises(DegenerateParametersError):
        specfun.meijer_g(spec, 1.0)


def test_shape_outside_restricted_class():
    spec = specfun.MeijerGSpec(1, 0, 1, 2, (0.5,), (0.0, 0.2))
    with pytest.raises(DomainError):
        specfun.meijer_g(spec, 1.0)
    with pytest.raises(DomainError):
        specfun.meijer_g(specfun.EXP_SHAPE, 0.0)
