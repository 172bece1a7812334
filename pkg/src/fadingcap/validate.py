"""Invariant grid behind ``fadingcap validate``.

Each check yields a metric, the tolerance it is held to and a verdict.
The relative checks (distribution, special functions, capacity) take their
tolerance from the caller's override when one is given, so loosening the
override never loses a pass. The entropy, KS and sample-mean checks keep
their fixed thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np
from scipy import special as sc
from scipy import stats

from . import specfun
from .capacity import c_opra_closed, c_opra_oracle, c_ora_closed, c_ora_oracle, solve_gamma0
from .corrections import ALL
from .entropy import (cross_entropy_closed, cross_entropy_oracle, entropy_oracle, matched_reference,
                      shannon_entropy_closed)
from .errors import FadingError
from .models import (AlphaEtaMuParams, AlphaLambdaMuParams, FadingModel, cdf_snr, db_to_linear, log_pdf_snr,
                     pdf_snr, sample)
from .numeric import integrate_semi_infinite

NORMALIZATION_TOL = 1e-8
POINTWISE_TOL = 1e-10
SPECFUN_TOL = 1e-10
CAPACITY_REL_TOL = 1e-4
ENTROPY_ABS_TOL = 0.1
KS_SIGNIFICANCE = 0.01
MEAN_REL_TOL = 0.01

CAPACITY_GRID = dict(alpha=(1, 2, 3), eta=(0.6, 1 + 1e-6, 2.0, 3.0), mu=(1, 2, 3), snr_db=(-5.0, 15.0, 35.0))
QUICK_CAPACITY_GRID = dict(alpha=(1, 3), eta=(0.6, 1 + 1e-6, 3.0), mu=(1, 2), snr_db=(-5.0, 35.0))
KS_MODELS = (
    AlphaEtaMuParams(2.0, 1.0, 1.0, 10.0),
    AlphaEtaMuParams(1.0, 0.6, 2.0, 3.0),
    AlphaEtaMuParams(3.0, 2.0, 2.0, 30.0),
    AlphaEtaMuParams(0.5, 3.0, 1.0, 1.0),
    AlphaLambdaMuParams(1.5, 0.25, 3.0, 5.0),
)


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    metric: float
    tol: float
    passed: bool
    model: Optional[FadingModel] = None


def _verdict(group, name, metric, tol, model=None, *, larger_is_better=False) -> Check:
    ok = bool(np.isfinite(metric)) and (metric >= tol if larger_is_better else metric <= tol)
    return Check(group, name, float(metric), float(tol), ok, model)


def _grid_models() -> Iterator[FadingModel]:
    for a in (0.5, 1.0, 2.0, 3.0):
        for eta in (0.3, 1.0, 2.0):
            for mu in (0.5, 1.0, 2.5):
                for db in (-5.0, 15.0, 35.0):
                    yield AlphaEtaMuParams(a, eta, mu, db_to_linear(db))


def _eta_mu_reference_pdf(eta: float, mu: float, mean: float, g: np.ndarray) -> np.ndarray:
    """eta-mu SNR density in the (h, H) parametrisation, coded independently of the family code."""
    h = (2 + 1 / eta + eta) / 4
    big_h = abs(1 / eta - eta) / 4
    x = 2 * mu * g / mean
    log_front = (0.5 * math.log(math.pi) + (mu + 0.5) * math.log(mu) + mu * math.log(h) + math.log(2)
                 - sc.gammaln(mu) - (mu - 0.5) * math.log(big_h) - (mu + 0.5) * math.log(mean))
    return np.exp(log_front + (mu - 0.5) * np.log(g) - h * x + np.log(sc.ive(mu - 0.5, big_h * x)) + big_h * x)


def _lambda_reference_log_pdf(model: AlphaLambdaMuParams, g: np.ndarray) -> np.ndarray:
    """alpha-lambda-mu log density from the lambda form of the unit-mean eta-mu law."""
    a, lam, mu, gb = model.alpha, model.lam, model.mu, model.mean_snr
    h = 1 / (1 - lam * lam)
    big_h = abs(lam) / (1 - lam * lam)
    u = (g / gb) ** (a / 2)
    x = 2 * mu * u
    log_f = (0.5 * math.log(math.pi) + (mu + 0.5) * math.log(mu) + mu * math.log(h) + math.log(2)
             - sc.gammaln(mu) - (mu - 0.5) * math.log(big_h)
             + (mu - 0.5) * np.log(u) - h * x + np.log(sc.ive(mu - 0.5, big_h * x)) + big_h * x)
    return log_f + math.log(a / 2) + np.log(u) - np.log(g)


def _rel(a, b) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def distribution_checks(rel: float) -> Iterator[Check]:
    for m in _grid_models():
        total = integrate_semi_infinite(lambda g: pdf_snr(m, g), 0.0, 1e-12, scale=m.mean_snr).value
        yield _verdict("distribution", "normalization", abs(total - 1), rel if rel else NORMALIZATION_TOL, m)
    g = np.geomspace(1e-3, 1e2, 41)
    worst = 0.0
    for m in _grid_models():
        vals = pdf_snr(m, g * m.mean_snr)
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            worst = math.inf
    yield _verdict("distribution", "nonnegative-finite", worst, 0.0)
    tol = rel if rel else POINTWISE_TOL
    for eta in (0.4, 2.0, 3.0):
        for mu in (0.5, 1.0, 2.0):
            m = AlphaEtaMuParams(2.0, eta, mu, 10.0)
            grid = np.geomspace(1e-2, 60, 50)
            yield _verdict("distribution", "alpha2-reduction", _rel(pdf_snr(m, grid),
                                                                     _eta_mu_reference_pdf(eta, mu, 10.0, grid)), tol, m)
    for a in (0.5, 1.0, 3.0):
        for lam in (-0.5, 0.1, 0.9):
            m = AlphaLambdaMuParams(a, lam, 1.5, 5.0)
            grid = np.geomspace(1e-2, 40, 50)
            yield _verdict("distribution", "lambda-mapping",
                           _rel(log_pdf_snr(m, grid), _lambda_reference_log_pdf(m, grid)), tol, m)
    for a, eta, mu in ((1.0, 0.4, 1.0), (2.5, 3.0, 2.0)):
        m1 = AlphaEtaMuParams(a, eta, mu, 4.0)
        m2 = AlphaEtaMuParams(a, 1 / eta, mu, 4.0)
        grid = np.geomspace(1e-2, 40, 50)
        yield _verdict("distribution", "eta-inversion-symmetry", _rel(pdf_snr(m1, grid), pdf_snr(m2, grid)), tol, m1)


def specfun_checks(rel: float) -> Iterator[Check]:
    tol = rel if rel else SPECFUN_TOL
    yield _verdict("specfun", "digamma(1) = -euler_gamma", abs(specfun.digamma(1.0) + specfun.EULER_GAMMA), tol)
    yield _verdict("specfun", "zeta(2) = pi^2/6", abs(complex(specfun.riemann_zeta(2.0)) - math.pi ** 2 / 6), tol)
    x = np.array([0.01, 0.5, 3.0, 25.0])
    yield _verdict("specfun", "gamma(0, x) = E1(x)", _rel(specfun.upper_incomplete_gamma(0, x), sc.exp1(x)), tol)
    for n in (1, 3, 6):
        ref = sc.gammaincc(n, x) * sc.gamma(n)
        yield _verdict("specfun", f"gamma({n}, x) finite sum", _rel(specfun.upper_incomplete_gamma(n, x), ref), tol)
    for k in (1, 2, 4):
        nu = k + 0.5
        lhs = specfun.bessel_i_half(k - 1, x) - specfun.bessel_i_half(k + 1, x)
        rhs = 2 * nu / x * specfun.bessel_i_half(k, x)
        yield _verdict("specfun", f"bessel recurrence order {nu}", _rel(lhs, rhs), tol)
    for z in (0.3, 2.0, 7.0):
        yield _verdict("specfun", "meijer exp shape", abs(specfun.meijer_g(specfun.EXP_SHAPE, z, shortcut=False)
                                                          - math.exp(-z)) / math.exp(-z), tol)
        yield _verdict("specfun", "meijer log1p shape",
                       abs(specfun.meijer_g(specfun.LOG1P_SHAPE, z, shortcut=False) - math.log1p(z)) / math.log1p(z),
                       tol)


def entropy_checks() -> Iterator[Check]:
    gb = db_to_linear(15.0)
    for a in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
        for eta in (2.0, 1 / 3):
            m = AlphaEtaMuParams(a, eta, 1.0, gb)
            yield _verdict("entropy", "H(p) closed vs oracle",
                           abs(shannon_entropy_closed(m, ALL) - entropy_oracle(m)), ENTROPY_ABS_TOL, m)
            q = matched_reference(m)
            yield _verdict("entropy", "H(p,q) closed vs oracle",
                           abs(cross_entropy_closed(m, q, ALL) - cross_entropy_oracle(m, q)), ENTROPY_ABS_TOL, m)


def capacity_checks(rel: float, quick: bool) -> Iterator[Check]:
    grid = QUICK_CAPACITY_GRID if quick else CAPACITY_GRID
    tol = rel if rel else CAPACITY_REL_TOL
    for a in grid["alpha"]:
        for eta in grid["eta"]:
            for mu in grid["mu"]:
                for db in grid["snr_db"]:
                    m = AlphaEtaMuParams(a, eta, mu, db_to_linear(db))
                    oracle = c_ora_oracle(m)
                    yield _verdict("capacity", "ORA closed vs oracle", abs(c_ora_closed(m, ALL) - oracle) / oracle,
                                   tol, m)
                    g0 = solve_gamma0(m)
                    oracle = c_opra_oracle(m, g0)
                    yield _verdict("capacity", "OPRA closed vs oracle", abs(c_opra_closed(m, g0) - oracle) / oracle,
                                   tol, m)


def sampler_checks(n: int, seed: int) -> Iterator[Check]:
    for i, m in enumerate(KS_MODELS):
        draws = sample(m, n, seed + i)
        p_value = stats.kstest(draws, lambda x: cdf_snr(m, x, 1e-9)).pvalue
        yield _verdict("sampler", "KS p-value", p_value, KS_SIGNIFICANCE, m, larger_is_better=True)
        # mean_snr is the alpha/2-power scale, so E[g^(alpha/2)] = mean_snr^(alpha/2); at alpha = 2 this is the mean.
        power = m.alpha / 2
        target = m.mean_snr ** power
        yield _verdict("sampler", "sample scale moment", abs(np.mean(draws ** power) - target) / target,
                       MEAN_REL_TOL, m)


def run_validation(tolerance: Optional[float] = None, quick: bool = False, seed: int = 0,
                   progress: Optional[Callable[[Check], None]] = None) -> list[Check]:
    """Run every check; an exception inside a group becomes a failed check."""
    rel = tolerance
    groups = [
        ("distribution", lambda: distribution_checks(rel)),
        ("specfun", lambda: specfun_checks(rel)),
        ("entropy", entropy_checks),
        ("capacity", lambda: capacity_checks(rel, quick)),
        ("sampler", lambda: sampler_checks(20_000 if quick else 100_000, seed)),
    ]
    out: list[Check] = []
    for group, make in groups:
        try:
            for check in make():
                out.append(check)
                if progress:
                    progress(check)
        except (FadingError, ArithmeticError, ValueError) as exc:
            out.append(Check(group, f"{type(exc).__name__}: {exc}", math.nan, math.nan, False))
    return out
