"""Ergodic capacity under optimum rate adaptation (ORA) and optimum power
and rate adaptation (OPRA), per unit bandwidth (bits/s/Hz).

For integer mu the Bessel factor has a finite expansion and the density is
a finite sum of terms g^(s-1) exp(-c g^(alpha/2)). ORA then reduces to
:func:`log_exp_moment` (a Meijer G function) and OPRA to incomplete gamma
functions. Close to eta = 1 the two exponentials nearly cancel, so both
closed forms switch to the power series of the scaled Bessel function,
whose terms decay like ((eta - 1)/(eta + 1))^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import specfun
from .corrections import NONE
from .errors import ClosedFormUnavailable, DomainError
from .models import (AlphaEtaMuParams, FadingModel, _log_prefactor, coefficients, is_integer, pdf_snr,
                     to_eta_model)
from .numeric import DEFAULT_REL_TOL, find_root_bracketed, integrate_semi_infinite

LN2 = math.log(2.0)
ORA = "ORA"
OPRA = "OPRA"
# |eta - 1| / (eta + 1) below this uses the series branch.
NEAR_UNITY = 0.05
_SERIES_MAX_TERMS = 200
_GAMMA0_FLOOR = 1e-10


@dataclass(frozen=True)
class CapacityReport:
    """Closed form, oracle and their gap, all in bits/s/Hz.

    ``gamma0`` is the cutoff SNR actually used (OPRA only).
    """

    policy: str
    closed_form: Optional[float]
    oracle: float
    gamma0: Optional[float] = None
    discrepancy: Optional[float] = None
    model_tag: str = ""
    note: str = ""


def _near_unity(eta: float) -> bool:
    return abs(eta - 1) / (eta + 1) < NEAR_UNITY


def _require_integer_mu(p: AlphaEtaMuParams) -> int:
    if not is_integer(p.mu):
        raise ClosedFormUnavailable("closed form requires integer mu (use oracle)")
    return int(p.mu)


def log_exp_moment(alpha: int, c: float, s: float, rel_tol: float = 1e-12) -> float:
    """int_0^inf x^(s-1) ln(1 + x) exp(-c x^(alpha/2)) dx for integer alpha, c > 0, s > 0."""
    if not (c > 0 and s > 0):
        raise DomainError("log_exp_moment needs c > 0 and s > 0")
    spec = specfun.log_exp_product_spec(alpha, s)
    log_front = ((2 * s / alpha + 0.5) * LN2 - math.log(alpha) - (alpha - 0.5) * math.log(2 * math.pi)
                 - (2 * s / alpha) * math.log(c))
    return math.exp(log_front) * specfun.meijer_g(spec, c * c / 4, rel_tol)


def _series_terms(p: AlphaEtaMuParams):
    """Yield (log a_j, s_j) with p(g) = sum_j a_j g^(s_j - 1) exp(-C g^(alpha/2))."""
    co = coefficients(p)
    log_pref = _log_prefactor(p)
    log_half_d = math.log(co.d1 / 2) if co.d1 > 0 else -math.inf
    for j in range(_SERIES_MAX_TERMS):
        if j and co.d1 == 0:
            return
        log_a = (log_pref + (2 * j * log_half_d if j else 0.0) - math.lgamma(j + 1)
                 - math.lgamma(j + p.mu + 0.5))
        yield log_a, p.alpha * (p.mu + j)


def _sum_series(p: AlphaEtaMuParams, term) -> float:
    total = 0.0
    for log_a, s in _series_terms(p):
        value = math.exp(log_a) * term(s)
        total += value
        if abs(value) <= 1e-17 * abs(total):
            break
    return total


def _bessel_weights(p: AlphaEtaMuParams):
    """(w_k, s_k) of the finite expansion for integer mu and eta != 1.

    p(g) = sum_k w_k g^(s_k - 1) [(-1)^k exp(-M g^b) + (-1)^mu exp(-P g^b)],
    b = alpha/2, M = C - D, P = C + D.
    """
    mu = int(p.mu)
    co = coefficients(p)
    a, eta, gb = p.alpha, p.eta, p.mean_snr
    log_lead = (math.log(a) + mu * math.log(mu) + mu * math.log1p(eta) - math.log(2) - math.lgamma(mu)
                - mu * math.log(abs(eta - 1)) - (a * mu / 2) * math.log(gb))
    out = []
    for k in range(mu):
        log_w = log_lead + math.lgamma(mu + k) - math.lgamma(k + 1) - math.lgamma(mu - k) - k * math.log(2 * co.d1)
        out.append((math.exp(log_w), a * (mu - k) / 2))
    return out, co.c1 - co.d1, co.c1 + co.d1


def c_ora_closed(model: FadingModel, corrections: frozenset = NONE, rel_tol: float = 1e-12) -> float:
    """ORA capacity C/B from the Meijer G closed form.

    Needs integer alpha and mu. The uncorrected form is not evaluable (its
    Meijer G lower row is two entries short), so ``ora-meijer`` must be active.
    """
    p = to_eta_model(model)
    if not is_integer(p.alpha):
        raise ClosedFormUnavailable("closed form requires integer alpha (use oracle)")
    mu = _require_integer_mu(p)
    if "ora-meijer" not in corrections:
        raise ClosedFormUnavailable("the uncorrected ORA Meijer G has an incomplete parameter row;"
                                    " enable the ora-meijer correction")
    a = int(p.alpha)
    co = coefficients(p)
    if _near_unity(p.eta):
        total = _sum_series(p, lambda s: log_exp_moment(a, co.c1, s, rel_tol))
    else:
        weights, m, pp = _bessel_weights(p)
        total = 0.0
        for k, (w, s) in enumerate(weights):
            total += w * ((-1) ** k * log_exp_moment(a, m, s, rel_tol)
                          + (-1) ** mu * log_exp_moment(a, pp, s, rel_tol))
    return total / LN2


def c_ora_oracle(model: FadingModel, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """ORA capacity C/B by quadrature of E[log2(1 + gamma)]."""
    p = to_eta_model(model)
    res = integrate_semi_infinite(lambda g: np.log1p(g) * _pdf0(p, g), 0.0, rel_tol, scale=p.mean_snr)
    return res.value / LN2


def _pdf0(p, g):
    g = np.asarray(g, dtype=float)
    out = np.zeros_like(g)
    pos = g > 0
    out[pos] = pdf_snr(p, g[pos])
    return out


@dataclass(frozen=True)
class OpraConstraint:
    """Average-power constraint g(gamma0) = int_{gamma0}^inf (1/gamma0 - 1/gamma) p - target."""

    model: FadingModel
    target: float = 1.0

    def __call__(self, gamma0: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
        if not gamma0 > 0:
            raise DomainError(f"gamma0 must be positive, got {gamma0}")
        p = to_eta_model(self.model)
        res = integrate_semi_infinite(lambda g: (1.0 / gamma0 - 1.0 / g) * pdf_snr(p, g), gamma0, rel_tol,
                                      scale=max(p.mean_snr, gamma0))
        return res.value - self.target


def opra_constraint(model: FadingModel, gamma0: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    return OpraConstraint(model)(gamma0, rel_tol)


def solve_gamma0(model: FadingModel, tol: float = 1e-10) -> float:
    """Cutoff SNR satisfying the unit average-power constraint.

    The constraint function decreases strictly from +inf at 0+ and is
    nonpositive at gamma0 = 1, since int_1^inf (1 - 1/gamma) p <= 1. The root
    therefore always lies in (0, 1] whatever the mean SNR.
    """
    p = to_eta_model(model)
    constraint = OpraConstraint(p)
    lo = _GAMMA0_FLOOR * min(1.0, p.mean_snr)
    return find_root_bracketed(lambda x: constraint(x, 1e-12), lo, 1.0, tol)


def c_opra_closed(model: FadingModel, gamma0: float) -> float:
    """OPRA capacity C/B from incomplete gamma sums (integer mu, any alpha > 0)."""
    if not gamma0 > 0:
        raise DomainError(f"gamma0 must be positive, got {gamma0}")
    p = to_eta_model(model)
    mu = _require_integer_mu(p)
    a, eta, gb = p.alpha, p.eta, p.mean_snr
    beta = a / 2
    ratio = (gamma0 / gb) ** beta
    if _near_unity(eta):
        c1 = coefficients(p).c1
        u0 = c1 * gamma0 ** beta

        def term(s):
            m = int(round(s / beta))
            inner = sum(specfun.upper_incomplete_gamma(i, u0) / math.factorial(i) for i in range(m))
            return math.exp(math.lgamma(m) - m * math.log(c1)) * inner / beta ** 2

        return _sum_series(p, term) / LN2
    u1 = (1 + eta) * mu * ratio / eta
    u2 = (1 + eta) * mu * ratio
    total = 0.0
    for k in range(mu):
        g_mk = math.gamma(mu + k)
        denom_k = math.factorial(k) * math.gamma(mu) * (eta - 1) ** (mu + k)
        for i in range(mu - k):
            num = ((-1) ** k * eta ** mu * g_mk * specfun.upper_incomplete_gamma(i, u1)
                   + (-1) ** mu * eta ** k * g_mk * specfun.upper_incomplete_gamma(i, u2))
            total += num / (denom_k * math.factorial(i))
    return 2 * total / (a * LN2)


def c_opra_oracle(model: FadingModel, gamma0: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """OPRA capacity C/B by quadrature of int_{gamma0}^inf log2(gamma/gamma0) p."""
    if not gamma0 > 0:
        raise DomainError(f"gamma0 must be positive, got {gamma0}")
    p = to_eta_model(model)
    res = integrate_semi_infinite(lambda g: np.log(g / gamma0) * pdf_snr(p, g), gamma0, rel_tol,
                                  scale=max(p.mean_snr, gamma0))
    return res.value / LN2


def opra_rate_with_cutoff(model: FadingModel, gamma0: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Rate of the water-filling power law with an arbitrary cutoff, rescaled to unit average power.

    Power S(g) = s (1/gamma0 - 1/g) above ``gamma0``, with s chosen so
    E[S] = 1; the rate is E[log2(1 + g S(g))]. The optimal cutoff maximises it
    and then coincides with :func:`c_opra_oracle`.
    """
    p = to_eta_model(model)
    spent = OpraConstraint(p)(gamma0, rel_tol) + 1.0
    s = 1.0 / spent
    scale = max(p.mean_snr, gamma0)
    res = integrate_semi_infinite(lambda g: np.log1p(s * (g / gamma0 - 1.0)) * pdf_snr(p, g), gamma0,
                                  rel_tol, scale=scale)
    return res.value / LN2


def _relative_gap(closed, oracle):
    if closed is None:
        return None
    return abs(closed - oracle) / max(abs(oracle), 1e-300)


def capacity_report(model: FadingModel, policy: str = ORA, corrections: frozenset = NONE,
                    rel_tol: float = DEFAULT_REL_TOL, gamma0: Optional[float] = None) -> CapacityReport:
    """Closed form (when the parameters admit one) next to the oracle.

    ``discrepancy`` is the relative gap. A closed form that is unavailable
    leaves ``closed_form`` empty and records why in ``note``; the oracle is
    always reported.
    """
    policy = policy.upper()
    p = to_eta_model(model)
    note = ""
    closed = None
    if policy == ORA:
        oracle = c_ora_oracle(p, rel_tol)
        try:
            closed = c_ora_closed(p, corrections)
        except ClosedFormUnavailable as exc:
            note = str(exc)
        return CapacityReport(ORA, closed, oracle, None, _relative_gap(closed, oracle), model.tag, note)
    if policy == OPRA:
        g0 = solve_gamma0(p) if gamma0 is None else float(gamma0)
        oracle = c_opra_oracle(p, g0, rel_tol)
        try:
            closed = c_opra_closed(p, g0)
        except ClosedFormUnavailable as exc:
            note = str(exc)
        return CapacityReport(OPRA, closed, oracle, g0, _relative_gap(closed, oracle), model.tag, note)
    raise DomainError(f"policy must be ORA or OPRA, got {policy!r}")


__all__ = [
    "CapacityReport", "OpraConstraint", "ORA", "OPRA", "log_exp_moment", "c_ora_closed", "c_ora_oracle",
    "opra_constraint", "solve_gamma0", "c_opra_closed", "c_opra_oracle", "opra_rate_with_cutoff",
    "capacity_report",
]
