"""Special functions behind the closed forms.

Gamma-family wrappers, the integer-order upper incomplete gamma via its
finite sum, half-integer modified Bessel functions via their exponential
finite sums, Riemann zeta on complex arguments, and a Meijer G evaluator
for the restricted class of shapes the capacity and entropy closed forms
need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import DegenerateParametersError, DomainError, QuadratureError

EULER_GAMMA = 0.57721566490153286060651209008240243

_BERNOULLI_EVEN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
                   -3617 / 510, 43867 / 798, -174611 / 330)


def ln_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def digamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return float(sc.digamma(x))


def exp_integral_e1(x):
    """Exponential integral E1(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("E1 requires x > 0")
    out = sc.exp1(x)
    return float(out) if out.ndim == 0 else out


def upper_incomplete_gamma(n: int, x):
    """Gamma(n, x) for integer n >= 0 and x > 0.

    For n >= 1 this is the finite sum (n-1)! e^{-x} sum_{k<n} x^k / k!;
    Gamma(0, x) is E1(x).
    """
    if int(n) != n or n < 0:
        raise DomainError(f"upper_incomplete_gamma needs integer n >= 0, got {n}")
    n = int(n)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("upper_incomplete_gamma requires x > 0")
    if n == 0:
        out = sc.exp1(x)
    else:
        term = np.ones_like(x)
        acc = np.ones_like(x)
        for k in range(1, n):
            term = term * x / k
            acc = acc + term
        out = math.factorial(n - 1) * np.exp(-x) * acc
    return float(out) if np.ndim(out) == 0 else out


def _bessel_i_half_series(order_num: int, x: np.ndarray) -> np.ndarray:
    nu = order_num + 0.5
    half = 0.5 * x
    sq = half * half
    term = half ** nu / math.gamma(nu + 1.0)
    acc = term.copy()
    for k in range(1, 200):
        term = term * sq / (k * (k + nu))
        acc = acc + term
        if np.all(term <= 1e-17 * acc):
            break
    return acc


def _bessel_i_half_finite(order_num: int, x: np.ndarray) -> np.ndarray:
    # I_{n+1/2}(x) = (2 pi x)^{-1/2} sum_k (n+k)!/(k!(n-k)!(2x)^k) [(-1)^k e^x + (-1)^{n+1} e^{-x}]
    n = order_num
    rising = np.zeros_like(x)
    falling = np.zeros_like(x)
    for k in range(n + 1):
        c = math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k)) / (2.0 * x) ** k
        rising = rising + (-1) ** k * c
        falling = falling + c
    with np.errstate(over="ignore"):
        return (rising * np.exp(x) + (-1) ** (n + 1) * falling * np.exp(-x)) / np.sqrt(2 * np.pi * x)


def bessel_i_half(order_num: int, x):
    """Modified Bessel function I_{order_num + 1/2}(x) for x >= 0.

    Uses the finite exponential sum, switching to the ascending series where
    the sum would cancel: below |x| = 1e-3 for order 1/2, and below
    |x| = 2 * order_num + 2 for higher orders.
    """
    if int(order_num) != order_num or order_num < 0:
        raise DomainError(f"order_num must be a nonnegative integer, got {order_num}")
    order_num = int(order_num)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("bessel_i_half needs finite x")
    if np.any(x < 0):
        raise DomainError("bessel_i_half is evaluated for x >= 0 (callers use magnitudes)")
    cutoff = 1e-3 if order_num == 0 else 2.0 * order_num + 2.0
    out = np.zeros_like(x)
    small = (x > 0) & (x < cutoff)
    large = x >= cutoff
    if small.any():
        out[small] = _bessel_i_half_series(order_num, x[small])
    if large.any():
        out[large] = _bessel_i_half_finite(order_num, x[large])
    return float(out) if out.ndim == 0 else out


def riemann_zeta(s):
    """Riemann zeta for complex ``s`` away from the pole, by Euler-Maclaurin summation."""
    s = np.asarray(s, dtype=complex)
    big_n = int(12 + np.max(np.abs(s.imag), initial=0.0))
    ns = np.arange(1, big_n, dtype=float)
    head = np.exp(-s[..., None] * np.log(ns)).sum(axis=-1)
    log_n = math.log(big_n)
    acc = head + np.exp((1 - s) * log_n) / (s - 1) + 0.5 * np.exp(-s * log_n)
    rising = s.copy()
    fact = 2.0
    for k, b2k in enumerate(_BERNOULLI_EVEN, start=1):
        acc = acc + b2k / fact * rising * np.exp(-(s + 2 * k - 1) * log_n)
        rising = rising * (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    return acc


def delta_seq(x: int, y: float) -> list[float]:
    """The sequence y/x, (y+1)/x, ..., (y+x-1)/x."""
    if int(x) != x or x < 1:
        raise DomainError(f"delta_seq needs a positive integer x, got {x}")
    return [(y + k) / x for k in range(int(x))]


@dataclass(frozen=True)
class MeijerGSpec:
    """Orders (m, n, p, q) and parameter rows of G^{m,n}_{p,q}(x | a; b)."""

    m: int
    n: int
    p: int
    q: int
    a_params: tuple[float, ...] = ()
    b_params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a_params", tuple(float(v) for v in self.a_params))
        object.__setattr__(self, "b_params", tuple(float(v) for v in self.b_params))
        if len(self.a_params) != self.p or len(self.b_params) != self.q:
            raise DomainError(
                f"parameter rows have lengths ({len(self.a_params)}, {len(self.b_params)}),"
                f" orders need ({self.p}, {self.q})"
            )
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise DomainError(f"need m <= q and n <= p, got {self}")

    @property
    def is_exponential(self) -> bool:
        return (self.m, self.n, self.p, self.q) == (1, 0, 0, 1)

    @property
    def is_log1p(self) -> bool:
        return (self.m, self.n, self.p, self.q) == (1, 2, 2, 2) and \
            self.a_params == (1.0, 1.0) and self.b_params == (1.0, 0.0)


EXP_SHAPE = MeijerGSpec(1, 0, 0, 1, (), (0.0,))
LOG1P_SHAPE = MeijerGSpec(1, 2, 2, 2, (1.0, 1.0), (1.0, 0.0))


def log_exp_product_spec(alpha: int, power: float) -> MeijerGSpec:
    """Meijer G closing int_0^inf x^{power-1} ln(1+x) exp(-c x^{alpha/2}) dx.

    Integer ``alpha`` only. See :func:`fadingcap.capacity.log_exp_moment` for
    the prefactor and argument (``c**2 / 4``).
    """
    if int(alpha) != alpha or alpha < 1:
        raise DomainError(f"composite shape requires integer alpha >= 1, got {alpha}")
    alpha = int(alpha)
    a_row = delta_seq(alpha, 0.0) + delta_seq(alpha, 1.0)
    b_row = delta_seq(alpha, 0.0) + delta_seq(alpha, 0.0) + delta_seq(2, 2.0 * power / alpha)
    return MeijerGSpec(2 * alpha + 2, alpha, 2 * alpha, 2 * alpha + 2, tuple(a_row), tuple(b_row))


def _contour(spec: MeijerGSpec) -> tuple[float, float]:
    left = -min(spec.b_params[: spec.m]) if spec.m else -math.inf
    right = 1.0 - max(spec.a_params[: spec.n]) if spec.n else math.inf
    if not left < right:
        raise DegenerateParametersError(
            f"degenerate parameters: left poles reach {left}, right poles start at {right}"
        )
    if math.isinf(left) and math.isinf(right):
        return 0.0, 0.5
    if math.isinf(right):
        return left + 0.5, 0.5
    if math.isinf(left):
        return right - 0.5, 0.5
    return 0.5 * (left + right), 0.5 * (right - left)


def _mb_integrand(spec: MeijerGSpec, log_x: float, s: np.ndarray) -> np.ndarray:
    a = spec.a_params
    b = spec.b_params
    acc = -s * log_x
    for bj in b[: spec.m]:
        acc = acc + sc.loggamma(bj + s)
    for aj in a[: spec.n]:
        acc = acc + sc.loggamma(1.0 - aj - s)
    for bj in b[spec.m:]:
        acc = acc - sc.loggamma(1.0 - bj - s)
    for aj in a[spec.n:]:
        acc = acc - sc.loggamma(aj + s)
    return np.exp(acc)


def _trapezoid_sum(phi, c, h, decay, rel_tol, max_height):
    chunk = 256
    total = 0.5 * phi(np.array([complex(c, 0.0)]))[0].real
    abs_total = abs(total)
    start = 1
    while True:
        t = h * np.arange(start, start + chunk)
        vals = phi(c + 1j * t)
        total += vals.real.sum()
        abs_total += np.abs(vals).sum()
        tail = np.abs(vals[-1]) / (math.pi * decay * h)
        if tail <= 1e-2 * rel_tol * abs(total) or np.abs(vals[-8:]).max() < 1e-300:
            break
        start += chunk
        if t[-1] > max_height:
            raise QuadratureError("Mellin-Barnes truncation did not converge",
                                  best_estimate=h * total / math.pi,
                                  error_estimate=h * tail / math.pi)
    return h * total / math.pi, h * abs_total / math.pi


def line_integral(phi, c: float, half_gap: float, decay: float, oscillation: float = 0.0,
                  rel_tol: float = 1e-10) -> float:
    """(1/2 pi i) times the integral of ``phi`` along Re s = c, for conjugate-symmetric ``phi``.

    ``phi`` maps complex arrays to complex arrays and must be analytic in the
    strip |Re s - c| < half_gap. ``decay`` is the rate in
    |phi(c + it)| ~ exp(-pi * decay * |t|) and ``oscillation`` bounds the
    growth rate of |phi| across the strip (|ln x| for a factor x**-s). The
    trapezoidal step starts from the strip-width estimate and is halved
    until two successive sums agree.
    """
    if decay <= 0:
        raise DomainError("contour integrand must decay exponentially")
    strip = 0.9 * half_gap
    h = min(0.25, 2 * math.pi * strip / (math.log(1 / rel_tol) + 8.0 + strip * oscillation))
    max_height = 60.0 + 200.0 / decay
    value, scale = _trapezoid_sum(phi, c, h, decay, rel_tol, max_height)
    for _ in range(8):
        finer, scale = _trapezoid_sum(phi, c, 0.5 * h, decay, rel_tol, max_height)
        settled = abs(finer - value) <= rel_tol * abs(finer) + 1e-15 * scale
        value, h = finer, 0.5 * h
        if settled:
            return float(value)
    raise QuadratureError("Mellin-Barnes step refinement did not converge",
                          best_estimate=value, error_estimate=abs(finer - value))


def meijer_g(spec: MeijerGSpec, x: float, rel_tol: float = 1e-10, *, shortcut: bool = True) -> float:
    """Evaluate G^{m,n}_{p,q}(x | a; b) for x > 0.

    The exponential and ln(1+x) shapes short-circuit to their elementary
    forms. Everything else goes through the Mellin-Barnes integral along a
    vertical line midway between the left and right pole families, summed
    with the trapezoidal rule. That is exponentially convergent for the
    restricted class accepted here: real parameters with
    m + n > (p + q) / 2.

    Raises:
        DegenerateParametersError: the pole families overlap.
        DomainError: x <= 0 or the shape lies outside the restricted class.
        QuadratureError: the contour sum failed to converge.
    """
    if not x > 0:
        raise DomainError(f"meijer_g requires x > 0, got {x}")
    if shortcut and spec.is_exponential:
        b0 = spec.b_params[0]
        return float(x ** b0 * math.exp(-x))
    if shortcut and spec.is_log1p:
        return math.log1p(x)
    decay = spec.m + spec.n - 0.5 * (spec.p + spec.q)
    if decay <= 0:
        raise DomainError(f"shape {spec.m, spec.n, spec.p, spec.q} lies outside the restricted class")
    c, half_gap = _contour(spec)
    log_x = math.log(x)
    return line_integral(lambda s: _mb_integrand(spec, log_x, s), c, half_gap, decay,
                         abs(log_x), rel_tol)
