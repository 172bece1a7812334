"""The alpha-eta-mu and alpha-lambda-mu SNR distributions.

Parameter sets, the stable SNR density, the lambda -> eta mapping, the
coefficients the closed forms are written in, a physical-model sampler and
numeric CDF / quantile / moments.

``mean_snr`` is the scale parameter of the density: it satisfies
``E[gamma**(alpha/2)] = mean_snr**(alpha/2)``, so it equals the first moment
only when ``alpha == 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special as sc

from .errors import DomainError
from .numeric import (DEFAULT_REL_TOL, cumulative_integral, find_root_bracketed, integrate_interval,
                      integrate_semi_infinite)

_SMALL_BESSEL_ARG = 1e-3
_SAMPLE_CHUNK = 1 << 16


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return value


@dataclass(frozen=True)
class AlphaEtaMuParams:
    """alpha-eta-mu parameters; ``mean_snr`` is linear."""

    alpha: float
    eta: float
    mu: float
    mean_snr: float

    def __post_init__(self):
        for name in ("alpha", "eta", "mu", "mean_snr"):
            object.__setattr__(self, name, _check_positive(name, getattr(self, name)))

    @property
    def tag(self) -> str:
        return f"alpha-eta-mu(alpha={self.alpha:g}, eta={self.eta:g}, mu={self.mu:g}, mean_snr={self.mean_snr:g})"


@dataclass(frozen=True)
class AlphaLambdaMuParams:
    """alpha-lambda-mu parameters; ``lam`` is the in-phase/quadrature correlation."""

    alpha: float
    lam: float
    mu: float
    mean_snr: float

    def __post_init__(self):
        for name in ("alpha", "mu", "mean_snr"):
            object.__setattr__(self, name, _check_positive(name, getattr(self, name)))
        lam = float(self.lam)
        if not abs(lam) < 1:
            raise DomainError(f"lambda must satisfy |lambda| < 1, got {lam}")
        object.__setattr__(self, "lam", lam)

    @property
    def tag(self) -> str:
        return (f"alpha-lambda-mu(alpha={self.alpha:g}, lambda={self.lam:g}, mu={self.mu:g},"
                f" mean_snr={self.mean_snr:g})")


FadingModel = Union[AlphaEtaMuParams, AlphaLambdaMuParams]


def to_eta_model(model: FadingModel) -> AlphaEtaMuParams:
    """Map an alpha-lambda-mu model onto alpha-eta-mu via eta = (1 - lam) / (1 + lam)."""
    if isinstance(model, AlphaEtaMuParams):
        return model
    if not isinstance(model, AlphaLambdaMuParams):
        raise TypeError(f"expected a fading model, got {type(model).__name__}")
    return AlphaEtaMuParams(model.alpha, (1.0 - model.lam) / (1.0 + model.lam), model.mu, model.mean_snr)


def is_integer(value: float) -> bool:
    return float(value).is_integer()


@dataclass(frozen=True)
class EtaCoefficients:
    """Density prefactor ``b1`` and exponent coefficients ``c1 > |d1|``.

    The density reads b1 * g**(a*mu/2 + a/4 - 1) * I_{mu-1/2}(d1 g**(a/2)) * exp(-c1 g**(a/2)),
    with the magnitude convention |eta - 1| for eta < 1. ``degenerate`` marks
    eta == 1, where d1 = 0 and b1 is infinite.
    """

    b1: float
    c1: float
    d1: float
    degenerate: bool = False


@dataclass(frozen=True)
class RefEtaCoefficients:
    """Coefficients of an eta-mu (alpha = 2, mu = 1) reference density."""

    b2: float
    c2: float
    d2: float
    eta_ref: float
    mean_snr_ref: float


def coefficients(model: FadingModel) -> EtaCoefficients:
    p = to_eta_model(model)
    a, eta, mu, gb = p.alpha, p.eta, p.mu, p.mean_snr
    scale = 2.0 * eta * gb ** (a / 2)
    c1 = mu * (1 + eta) ** 2 / scale
    d1 = mu * abs(eta * eta - 1) / scale
    if eta == 1.0:
        return EtaCoefficients(math.inf, c1, 0.0, degenerate=True)
    log_b1 = (math.log(a * math.sqrt(math.pi)) + (mu + 0.5) * math.log(mu) + (mu + 0.5) * math.log1p(eta)
              - math.log(2) - 0.5 * math.log(eta) - sc.gammaln(mu) - (mu - 0.5) * math.log(abs(eta - 1))
              - (a * mu / 2 + a / 4) * math.log(gb))
    return EtaCoefficients(math.exp(log_b1), c1, d1)


def reference_coefficients(eta_ref: float, mean_snr_ref: float) -> RefEtaCoefficients:
    """Coefficients of the eta-mu reference density with mu = 1."""
    co = coefficients(AlphaEtaMuParams(2.0, eta_ref, 1.0, mean_snr_ref))
    return RefEtaCoefficients(co.b1, co.c1, co.d1, float(eta_ref), float(mean_snr_ref))


def _log_prefactor(p: AlphaEtaMuParams) -> float:
    # log of b1 * (d1/2)**(mu - 1/2); the |eta - 1| powers cancel, so eta = 1 is regular.
    a, eta, mu, gb = p.alpha, p.eta, p.mu, p.mean_snr
    return (math.log(a * math.sqrt(math.pi)) + 2 * mu * math.log(mu) + 2 * mu * math.log1p(eta) - math.log(2)
            - 0.5 * math.log(eta) - sc.gammaln(mu) - (mu - 0.5) * math.log(4 * eta) - a * mu * math.log(gb))


def _log_scaled_bessel(nu: float, x: np.ndarray) -> np.ndarray:
    """log of I_nu(x) / (x/2)**nu, finite down to x = 0."""
    out = np.empty_like(x)
    small = x < _SMALL_BESSEL_ARG
    xs = x[small]
    out[small] = -sc.gammaln(nu + 1) + np.log1p((0.5 * xs) ** 2 / (nu + 1))
    xl = x[~small]
    with np.errstate(divide="ignore"):
        out[~small] = np.log(sc.ive(nu, xl)) + xl - nu * np.log(0.5 * xl)
    return out


def log_pdf_snr(model: FadingModel, gamma):
    """Natural log of the SNR density at ``gamma > 0``."""
    p = to_eta_model(model)
    g = np.asarray(gamma, dtype=float)
    if np.any(~(g > 0)):
        raise DomainError("the SNR density is defined for gamma > 0")
    co = coefficients(p)
    beta = p.alpha / 2
    with np.errstate(over="ignore"):
        gb = g ** beta
    out = (_log_prefactor(p) + (p.alpha * p.mu - 1) * np.log(g)
           + _log_scaled_bessel(p.mu - 0.5, np.atleast_1d(co.d1 * gb)).reshape(g.shape) - co.c1 * gb)
    return float(out) if out.ndim == 0 else out


def pdf_snr(model: FadingModel, gamma):
    """SNR density at ``gamma > 0``."""
    return np.exp(log_pdf_snr(model, gamma))


def _unit_power_model(p: AlphaEtaMuParams) -> AlphaEtaMuParams:
    # Law of (gamma / mean_snr)**(alpha/2): the same eta and mu with alpha = 2 and unit scale.
    return AlphaEtaMuParams(2.0, p.eta, p.mu, 1.0)


def cdf_snr(model: FadingModel, gamma, rel_tol: float = DEFAULT_REL_TOL):
    """P(snr <= gamma) by quadrature.

    Integrates in u = (gamma / mean_snr)**(alpha/2), whose density is the
    alpha = 2 member of the family and stays smooth at the origin for every
    alpha. Arrays are integrated cumulatively between sorted points.
    """
    p = to_eta_model(model)
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise DomainError("cdf_snr needs gamma >= 0")
    unit = _unit_power_model(p)
    u = (g / p.mean_snr) ** (p.alpha / 2)

    def density(v):
        v = np.asarray(v, dtype=float)
        out = np.zeros_like(v)
        pos = v > 0
        out[pos] = pdf_snr(unit, v[pos])
        return out

    if g.ndim == 0:
        uv = float(u)
        if uv == 0:
            return 0.0
        if uv <= 1.0:
            return float(integrate_interval(density, 0.0, uv, rel_tol).value)
        tail = integrate_semi_infinite(density, uv, rel_tol, scale=1.0).value
        return float(min(1.0, max(0.0, 1.0 - tail)))
    values, _ = cumulative_integral(density, u.ravel(), rel_tol)
    return np.clip(values, 0.0, 1.0).reshape(g.shape)


def quantile(model: FadingModel, prob: float, tol: float = 1e-12) -> float:
    """Inverse CDF by bracketed root finding in the unit-power variable."""
    if not 0 < prob < 1:
        raise DomainError(f"prob must lie in (0, 1), got {prob}")
    p = to_eta_model(model)
    unit = _unit_power_model(p)

    def excess(u):
        return cdf_snr(unit, u) - prob

    hi = 1.0
    while excess(hi) < 0:
        hi *= 2.0
    u = find_root_bracketed(excess, 0.0, hi, tol)
    return p.mean_snr * u ** (2.0 / p.alpha)


def sample(model: FadingModel, n: int, seed: int = 0) -> np.ndarray:
    """Draw ``n`` SNR variates from the physical model.

    The eta-mu power W sums the squared in-phase and quadrature Gaussians of
    2*mu clusters, with variance ratio eta between the two components, and
    gamma = mean_snr * (W / E[W])**(2/alpha). A counter-based Philox stream
    keeps draws reproducible under ``seed``.
    """
    p = to_eta_model(model)
    if not is_integer(p.mu):
        raise DomainError("sampler requires integer mu")
    if n < 1:
        raise DomainError("n must be at least 1")
    clusters = 2 * int(p.mu)
    var_x = p.eta / (1 + p.eta)
    var_y = 1.0 / (1 + p.eta)
    rng = np.random.Generator(np.random.Philox(seed))
    out = np.empty(n)
    for start in range(0, n, _SAMPLE_CHUNK):
        size = min(_SAMPLE_CHUNK, n - start)
        z = rng.standard_normal((size, clusters, 2))
        w = (var_x * z[..., 0] ** 2 + var_y * z[..., 1] ** 2).sum(axis=1)
        out[start:start + size] = w / clusters
    return p.mean_snr * out ** (2.0 / p.alpha)


def moment(model: FadingModel, k: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E[gamma**k] by quadrature."""
    if not k >= 0:
        raise DomainError(f"moment order must be >= 0, got {k}")
    p = to_eta_model(model)
    res = integrate_semi_infinite(lambda g: g ** k * pdf_snr(p, g), 0.0, rel_tol, scale=p.mean_snr)
    return res.value
