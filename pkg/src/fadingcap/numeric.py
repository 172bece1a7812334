"""Numerical machinery used as the independent oracle layer.

Semi-infinite adaptive quadrature (rational map onto [0, 1) followed by
global-adaptive Gauss-Kronrod 7/15 panels), bracketed root finding and
seeded Monte-Carlo estimation.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import BracketError, IntegrandDomainError, QuadratureError

# Gauss-Kronrod 15-point nodes on [-1, 1] (positive half, descending) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# 7-point Gauss weights, living on the odd-indexed Kronrod nodes.
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[[9, 11, 13]] = _WG[2::-1]
_GAUSS_W[7] = _WG[3]

DEFAULT_REL_TOL = 1e-10
ABS_FLOOR = 1e-12


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int


def _checked(values: np.ndarray) -> np.ndarray:
    if np.isnan(values).any():
        raise IntegrandDomainError("integrand domain error: integrand returned NaN")
    return values


def _gk15(g: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    fx = _checked(np.asarray(g(center + half * _NODES), dtype=float))
    kronrod = half * float(fx @ _KRONROD_W)
    gauss = half * float(fx @ _GAUSS_W)
    return kronrod, abs(kronrod - gauss)


def _adaptive(g, a, b, rel_tol, abs_tol, max_subdivisions):
    value, err = _gk15(g, a, b)
    heap = [(-err, a, b, value, err)]
    total, total_err = value, err
    evaluations = 15
    while total_err > max(abs_tol, rel_tol * abs(total)):
        if len(heap) >= max_subdivisions:
            raise QuadratureError(
                "quadrature failed: subdivision limit reached",
                best_estimate=total,
                error_estimate=total_err,
            )
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureError(
                "quadrature failed: panel width at machine resolution",
                best_estimate=total,
                error_estimate=total_err,
            )
        v1, e1 = _gk15(g, lo, mid)
        v2, e2 = _gk15(g, mid, hi)
        evaluations += 30
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
    # Re-sum to shed the drift of the running updates.
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    if not math.isfinite(total):
        raise QuadratureError("quadrature failed: non-finite result",
                              best_estimate=total, error_estimate=total_err)
    return QuadratureResult(total, total_err, evaluations)


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    lower: float = 0.0,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    scale: float = 1.0,
    abs_tol: float = ABS_FLOOR,
    max_subdivisions: int = 4000,
) -> QuadratureResult:
    """Integrate ``f`` over ``[lower, inf)``.

    The substitution ``x = lower + scale * t / (1 - t)`` maps the range onto
    ``t in [0, 1)``; ``scale`` should be of the order of the integrand's
    characteristic width (e.g. the mean SNR). ``f`` must accept and return
    numpy arrays.

    Raises:
        QuadratureError: tolerance not reached within ``max_subdivisions``
            panels; carries the best estimate and its error.
        IntegrandDomainError: the integrand produced NaN.
    """
    if not 1e-14 < rel_tol < 1e-2:
        raise ValueError(f"rel_tol must lie in (1e-14, 1e-2), got {rel_tol}")
    if lower < 0 or scale <= 0:
        raise ValueError("lower must be >= 0 and scale > 0")

    def mapped(t):
        one_minus = 1.0 - t
        x = lower + scale * t / one_minus
        with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
            y = np.asarray(f(x), dtype=float) * (scale / (one_minus * one_minus))
        # Integrand underflow at x -> inf can surface as inf * 0.
        y = np.where(np.isinf(x), 0.0, y)
        return y

    return _adaptive(mapped, 0.0, 1.0, rel_tol, abs_tol, max_subdivisions)


def integrate_interval(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    abs_tol: float = ABS_FLOOR,
    max_subdivisions: int = 4000,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over the finite ``[a, b]``."""
    if a == b:
        return QuadratureResult(0.0, 0.0, 1)
    if a > b:
        r = integrate_interval(f, b, a, rel_tol, abs_tol=abs_tol, max_subdivisions=max_subdivisions)
        return QuadratureResult(-r.value, r.abs_error_estimate, r.evaluations)

    def g(x):
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            return f(x)

    return _adaptive(g, float(a), float(b), rel_tol, abs_tol, max_subdivisions)


def cumulative_integral(
    f: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    rel_tol: float = DEFAULT_REL_TOL,
) -> tuple[np.ndarray, float]:
    """Return ``F(x_i) = int_0^{x_i} f`` for nonnegative ``points`` (any order).

    The first segment ``[0, min x]`` is integrated adaptively; the remaining
    segments between consecutive sorted points use one vectorised GK15 panel
    each, which is accurate when the points are dense relative to the
    integrand's variation. Returns the values and the summed error estimate.
    """
    x = np.asarray(points, dtype=float)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    if xs.size == 0:
        return xs.copy(), 0.0
    if xs[0] < 0:
        raise ValueError("points must be nonnegative")
    head = integrate_interval(f, 0.0, float(xs[0]), rel_tol) if xs[0] > 0 else QuadratureResult(0.0, 0.0, 1)
    lo, hi = xs[:-1], xs[1:]
    half = 0.5 * (hi - lo)
    center = 0.5 * (hi + lo)
    nodes = center[:, None] + half[:, None] * _NODES[None, :]
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        fx = _checked(np.asarray(f(nodes), dtype=float))
    seg_k = half * (fx @ _KRONROD_W)
    seg_g = half * (fx @ _GAUSS_W)
    cum = np.concatenate([[head.value], head.value + np.cumsum(seg_k)])
    out = np.empty_like(cum)
    out[order] = cum
    return out, head.abs_error_estimate + float(np.abs(seg_k - seg_g).sum())


def find_root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    *,
    max_iter: int = 500,
) -> float:
    """Locate a sign change of ``f`` in ``[lo, hi]`` with Brent's method.

    Terminates once the root is pinned to ``tol * max(1, |x|)``.

    Raises:
        BracketError: ``f(lo)`` and ``f(hi)`` share a strict sign, or ``f``
            returns NaN inside the bracket.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.isnan(flo) or math.isnan(fhi) or flo * fhi > 0:
        raise BracketError(f"bracket error: f({lo})={flo} and f({hi})={fhi} have no sign change")

    def checked(x):
        fx = f(x)
        if math.isnan(fx):
            raise BracketError(f"function returned NaN at x={x}")
        return fx

    rtol = max(tol, 4 * np.finfo(float).eps)
    return optimize.brentq(checked, lo, hi, xtol=tol, rtol=rtol, maxiter=max_iter)


def mc_estimate(
    sampler: Callable[[int, int], np.ndarray],
    statistic: Callable[[np.ndarray], np.ndarray],
    n: int,
    seed: int = 0,
) -> MonteCarloEstimate:
    """Monte-Carlo mean of ``statistic`` over ``n`` draws of ``sampler(n, seed)``."""
    if n < 100:
        raise ValueError("Monte-Carlo estimation needs n >= 100")
    draws = np.asarray(sampler(n, seed))
    values = np.broadcast_to(np.asarray(statistic(draws), dtype=float), draws.shape)
    mean = float(values.mean())
    std_error = float(values.std(ddof=1) / math.sqrt(n))
    return MonteCarloEstimate(mean, std_error, n, seed)
