"""Shannon, cross and relative entropy of the SNR distribution, in bits.

The closed forms cover mu = 1, where I_{1/2} makes the density a difference
of two stretched exponentials,
    p(g) = K g^(b-1) (exp(-M g^b) - exp(-P g^b)),  b = alpha/2,
with K = B1 / sqrt(2 pi D1), M = C1 - D1 and P = C1 + D1. The oracles
integrate the definitions directly and accept any parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special as sc

from . import specfun
from .corrections import NONE
from .errors import ClosedFormUnavailable, DegenerateParametersError, DomainError
from .models import (AlphaEtaMuParams, AlphaLambdaMuParams, FadingModel, coefficients, log_pdf_snr,
                     reference_coefficients, to_eta_model)
from .numeric import DEFAULT_REL_TOL, integrate_semi_infinite

LN2 = math.log(2.0)
# Gamma(2/alpha - 1) has its only pole for alpha > 0 at alpha = 2.
_GAMMA_POLE_WINDOW = 1e-3


@dataclass(frozen=True)
class EntropyReport:
    """Closed form next to its oracle, in bits.

    ``closed_method`` is ``"closed"`` when the closed form was evaluated,
    ``"oracle-rerouted"`` when the uncorrected form is singular and the oracle
    stands in, and ``None`` when no closed form applies.
    """

    closed_form: Optional[float]
    oracle: float
    discrepancy: Optional[float]
    model_tag: str
    ref_tag: str = ""
    closed_method: Optional[str] = "closed"


def _mu_one_terms(model: FadingModel):
    p = to_eta_model(model)
    if p.mu != 1.0:
        raise ClosedFormUnavailable("closed form requires mu = 1")
    co = coefficients(p)
    if co.degenerate:
        raise DegenerateParametersError("degenerate-eta: eta = 1 has no closed form here, use the oracle")
    k = co.b1 / math.sqrt(2 * math.pi * co.d1)
    return p, co, k, co.c1 - co.d1, co.c1 + co.d1


def matched_reference(model: FadingModel) -> FadingModel:
    """The default eta-mu reference: alpha = 2, mu = 1, same eta (or lambda) and scale."""
    if isinstance(model, AlphaLambdaMuParams):
        return AlphaLambdaMuParams(2.0, model.lam, 1.0, model.mean_snr)
    return AlphaEtaMuParams(2.0, model.eta, 1.0, model.mean_snr)


def shannon_entropy_closed(model: FadingModel, corrections: frozenset = NONE) -> float:
    """H(p) in bits for mu = 1 (eta != 1).

    Uncorrected, this is the three-group expression with the exp(-x) term
    inside ln I_{1/2} dropped. ``entropy-constant-group`` and
    ``entropy-log-term`` repair it; with both, the result is exact.
    """
    p, co, k, m, pp = _mu_one_terms(model)
    a, b1, c1, d1 = p.alpha, co.b1, co.c1, co.d1
    g = specfun.EULER_GAMMA
    root = math.sqrt(2 * math.pi * d1)
    first = b1 / (a * LN2) * ((g + math.log(pp)) / (root * pp) - (g + math.log(m)) / (root * m))
    second = (b1 * (3 * a - 4) / (LN2 * a * a * math.sqrt(math.pi))
              * ((g + math.log(m)) / (math.sqrt(2 * d1) * m) - (g + math.log(pp)) / (math.sqrt(2 * d1) * pp)))
    log_k = math.log(b1) - math.log(root)
    if "entropy-constant-group" in corrections:
        third = (-log_k + (2 * k * m / a) * (1 / m ** 2 - 1 / pp ** 2)) / LN2
    else:
        sp = math.sqrt(math.pi)
        shift = d1 - c1 / d1
        third = (b1 * math.sqrt(2) / (LN2 * a)
                 * (log_k / (sp * d1 * pp) + shift / (sp * pp ** 2) - log_k / (sp * d1 * m) - shift / (sp * m ** 2)))
    total = first + second + third
    if "entropy-log-term" in corrections:
        total += _entropy_log_term(a, k, m, d1) / LN2
    return total


def _entropy_log_term(alpha, k, m, d1):
    # -E[ln(1 - exp(-2 D1 u))] with u = g^(alpha/2) ~ (2K/alpha)(e^{-Mu} - e^{-(M+2D1)u}); the series
    # sum_n 1/n [1/(M + 2 D1 n) - 1/(M + 2 D1 (n+1))] telescopes into digammas.
    r = m / (2 * d1)
    g = specfun.EULER_GAMMA
    series = ((sc.digamma(r + 1) + g) / r - (sc.digamma(r + 2) + g) / (r + 1)) / (2 * d1)
    return (2 * k / alpha) * series


def _reference_terms(p: AlphaEtaMuParams, reference: FadingModel, corrections):
    ref = to_eta_model(reference)
    if ref.alpha != 2.0 or ref.mu != 1.0:
        raise ClosedFormUnavailable("the cross-entropy closed form needs an eta-mu reference with mu = 1")
    if ref.eta == 1.0:
        raise DegenerateParametersError("degenerate-eta reference, use the oracle")
    er, gr = ref.eta, ref.mean_snr
    exact = reference_coefficients(er, gr)
    if "cross-prefactor" in corrections:
        b2 = exact.b2
    else:
        b2 = math.sqrt(er + 1) * math.sqrt(abs(er - 1)) * math.sqrt(math.pi) / (math.sqrt(er) * math.sqrt(gr))
    if "cross-d2-symmetric" in corrections:
        d2 = exact.d2
    else:
        d2 = (er + 1) * abs(p.eta - 1) / (2 * er * gr)
    return b2, exact.c2, d2


def cross_entropy_closed(model: FadingModel, reference: FadingModel, corrections: frozenset = NONE) -> float:
    """H(p, q) in bits for mu = 1 against an eta-mu reference q.

    Raises:
        ClosedFormUnavailable: mu != 1, a non eta-mu reference, or the
            uncorrected Gamma(2/alpha - 1) evaluated within 1e-3 of its pole
            at alpha = 2.
    """
    p, co, k, m, pp = _mu_one_terms(model)
    a, b1, d1 = p.alpha, co.b1, co.d1
    b2, c2, d2 = _reference_terms(p, reference, corrections)
    if "cross-gamma-order" in corrections:
        gamma_factor = math.gamma(1 + 2 / a)
    else:
        if abs(a - 2.0) < _GAMMA_POLE_WINDOW:
            raise ClosedFormUnavailable("Gamma(2/alpha - 1) is singular at alpha = 2")
        gamma_factor = math.gamma(2 / a - 1)
    first = ((math.log(b2) - math.log(math.sqrt(2 * math.pi * d2)))
             / (1 / b1 * 2 ** -0.5 * a * LN2 * math.sqrt(math.pi * d1)) * (1 / pp - 1 / m))
    second = (math.sqrt(2) * (c2 - d2) / (a * LN2 * math.sqrt(math.pi * d1))
              * (b1 * gamma_factor / m ** (1 + 2 / a) - b1 * gamma_factor / pp ** (1 + 2 / a)))
    total = first + second
    if "cross-log-term" in corrections:
        total += cross_log_term(a, k, m, pp, d2) / LN2
    return total


def cross_log_term(alpha: float, k: float, m: float, pp: float, d2: float, rel_tol: float = 1e-11) -> float:
    """-E_p[ln(1 - exp(-2 d2 g))] for p = K g^(b-1)(e^{-M g^b} - e^{-P g^b}), b = alpha/2.

    Expanding the logarithm and swapping sums gives one Mellin-Barnes integral
        (K/b) (1/2 pi i) int Gamma(s) Gamma(1 - s/b) zeta(1 + s) (2 d2)^-s [M^(s/b-1) - P^(s/b-1)] ds
    along 0 < Re s < b.
    """
    b = alpha / 2
    log_t, log_m, log_p = math.log(2 * d2), math.log(m), math.log(pp)

    def phi(s):
        common = sc.loggamma(s) + sc.loggamma(1 - s / b) - s * log_t
        diff = np.exp(common + (s / b - 1) * log_m) - np.exp(common + (s / b - 1) * log_p)
        return (k / b) * diff * specfun.riemann_zeta(1 + s)

    oscillation = max(abs(log_t), abs(log_m) / b, abs(log_p) / b)
    return specfun.line_integral(phi, b / 2, b / 2, 0.5 * (1 + 1 / b), oscillation, rel_tol)


def _quad_scale(p: AlphaEtaMuParams) -> float:
    return p.mean_snr


def entropy_oracle(model: FadingModel, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """-int p log2 p by quadrature; points where p underflows contribute 0."""
    p = to_eta_model(model)

    def integrand(g):
        lp = log_pdf_snr(p, g)
        dens = np.exp(lp)
        return np.where(dens > 0, -dens * lp, 0.0)

    return integrate_semi_infinite(integrand, 0.0, rel_tol, scale=_quad_scale(p)).value / LN2


def cross_entropy_oracle(model: FadingModel, reference: FadingModel, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """-int p log2 q by quadrature, with log q evaluated in log space."""
    p = to_eta_model(model)
    q = to_eta_model(reference)

    def integrand(g):
        dens = np.exp(log_pdf_snr(p, g))
        lq = log_pdf_snr(q, g)
        bad = (dens > 0) & ~np.isfinite(lq)
        if np.any(bad):
            raise DomainError("support mismatch: q vanishes where p is positive")
        return np.where(dens > 0, -dens * lq, 0.0)

    return integrate_semi_infinite(integrand, 0.0, rel_tol, scale=_quad_scale(p)).value / LN2


def _report(closed, oracle, model_tag, ref_tag, method):
    closed = None if closed is None else float(closed)
    disc = None if closed is None else abs(closed - float(oracle))
    return EntropyReport(closed, float(oracle), disc, model_tag, ref_tag, method if closed is not None else None)


def entropy_report(model: FadingModel, corrections: frozenset = NONE,
                   rel_tol: float = DEFAULT_REL_TOL) -> EntropyReport:
    oracle = entropy_oracle(model, rel_tol)
    try:
        closed = shannon_entropy_closed(model, corrections)
    except (ClosedFormUnavailable, DegenerateParametersError):
        closed = None
    return _report(closed, oracle, model.tag, "", "closed")


def cross_entropy_report(model: FadingModel, reference: Optional[FadingModel] = None,
                         corrections: frozenset = NONE, rel_tol: float = DEFAULT_REL_TOL) -> EntropyReport:
    reference = matched_reference(model) if reference is None else reference
    oracle = cross_entropy_oracle(model, reference, rel_tol)
    method = "closed"
    try:
        closed = cross_entropy_closed(model, reference, corrections)
    except ClosedFormUnavailable as exc:
        closed = None
        if "singular" in str(exc):
            closed, method = oracle, "oracle-rerouted"
    except DegenerateParametersError:
        closed = None
    return _report(closed, oracle, model.tag, reference.tag, method)


def relative_entropy(model: FadingModel, reference: Optional[FadingModel] = None,
                     corrections: frozenset = NONE, rel_tol: float = DEFAULT_REL_TOL) -> EntropyReport:
    """D(p || q) = H(p, q) - H(p).

    The closed value pairs two evaluated closed forms and is absent otherwise;
    the oracle value pairs the two oracles. The two are never mixed.
    """
    reference = matched_reference(model) if reference is None else reference
    h = entropy_report(model, corrections, rel_tol)
    hx = cross_entropy_report(model, reference, corrections, rel_tol)
    closed = None
    if h.closed_form is not None and hx.closed_method == "closed":
        closed = hx.closed_form - h.closed_form
    return _report(closed, hx.oracle - h.oracle, model.tag, reference.tag, "closed")
