"""Closed forms for the M/M/1+M queue with abandonment up to the end of service.

Rates are ``lambda_n = lam``, ``mu_n = mu + n*theta`` and costs ``c_n = n*theta``
(the abandonment rate).  With ``alpha = mu/theta`` and ``kappa = lam/theta`` the
steady state is a truncated Poisson-like law expressed through the regularized
incomplete gamma function.

Everything here is written in terms of the positive series

    S(a, x) = sum_{k>=0} x**k / (a (a+1) ... (a+k)),

for which ``gamma_lower(a, x) = x**a * exp(-x) * S(a, x)``.  Ratios of lower
incomplete gammas then reduce to ratios of ``S`` values, which never overflow
however large ``n`` gets.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import mpmath

from .arith import FLOAT, Arithmetic
from .errors import DomainError

SERIES_RTOL = 1e-17
MAX_ITER = 10_000
_TINY = sys.float_info.min / sys.float_info.epsilon


@dataclass(frozen=True)
class Mm1mParams:
    """Arrival rate ``lam``, service rate ``mu``, abandonment rate ``theta``."""

    lam: float
    mu: float
    theta: float

    def __post_init__(self):
        for name in ("lam", "mu", "theta"):
            v = getattr(self, name)
            if not (float(v) > 0 and math.isfinite(float(v))):
                raise DomainError(f"{name} must be finite and positive, got {v!r}")

    @property
    def alpha(self) -> float:
        return self.mu / self.theta

    @property
    def kappa(self) -> float:
        return self.lam / self.theta

    def converted(self, arith: Arithmetic):
        lam, mu, theta = (arith.num(v) for v in (self.lam, self.mu, self.theta))
        return lam, mu, theta, mu / theta, lam / theta


def _series(a, x, arith: Arithmetic = FLOAT):
    """``S(a, x)``; terms are positive so the relative stopping rule is safe."""
    term = arith.one() / a
    total = term
    rtol = SERIES_RTOL if arith.is_float else mpmath.mpf(10) ** (-(arith.dps + 5))
    ak = a
    for _ in range(MAX_ITER):
        ak = ak + 1
        term = term * x / ak
        total = total + term
        if term < total * rtol:
            return total
    raise DomainError(f"incomplete gamma series did not converge for a={a}, x={x}")


_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360)


def _stirling_error(a: float) -> float:
    """``lgamma(a) - ((a - 1/2) log a - a + log(2 pi)/2)``."""
    if a < 10.0:
        return math.lgamma(a) - ((a - 0.5) * math.log(a) - a + _HALF_LOG_2PI)
    inv2 = 1.0 / (a * a)
    total = 0.0
    for c in reversed(_STIRLING):
        total = total * inv2 + c
    return total / a


def _log1pmx(d: float) -> float:
    """``log(1 + d) - d`` without cancellation near ``d = 0`` (for ``|d| <= 1/2``)."""
    # -d^2/2 + d^3/3 - ...; |d| <= 1/2 needs about 50 terms for full accuracy
    term = -d
    total = 0.0
    for k in range(2, 200):
        term *= -d
        add = -term / k
        total += add
        if abs(add) < 1e-17 * abs(total):
            break
    return total


def _prefix(a: float, x: float) -> float:
    """``x**a exp(-x) / Gamma(a)`` formed without large cancelling logarithms."""
    if a < 10.0:
        return math.exp(a * math.log(x) - x - math.lgamma(a))
    # a log x - x - lgamma(a) = a (log t - t + 1) + log(a / 2 pi)/2 - stirling_error(a), t = x / a
    d = (x - a) / a
    if abs(d) <= 0.5:
        core = _log1pmx(d)
    else:
        t = x / a
        core = (math.log(t) if t > 0 else math.log(x) - math.log(a)) - d
    arg = a * core + 0.5 * math.log(a) - _HALF_LOG_2PI - _stirling_error(a)
    return math.exp(arg)


# lgamma(1 + a) = -euler a + sum_{k>=2} (-1)**k zeta(k) a**k / k, used for small a
_LGAMMA1P = tuple(float((-1) ** k * mpmath.zeta(k) / k) for k in range(2, 60))
_EULER = float(mpmath.euler)


def _lgamma1p(a: float) -> float:
    """``lgamma(1 + a)`` without rounding ``1 + a`` first."""
    if a >= 0.5:
        return math.lgamma(1.0 + a)
    total = 0.0
    for c in reversed(_LGAMMA1P):
        total = total * a + c
    return a * (total * a - _EULER)


def _small_q(a: float, x: float) -> float:
    """Upper regularized gamma for ``a < 1``, ``x < 1`` without forming ``1 - P``.

    From ``gamma(a, x) = x**a sum_n (-x)**n / (n! (a + n))``:
    ``Q = -expm1(a log x - lgamma(1 + a)) - x**a / Gamma(1 + a) * a * sum_{n>=1} (-x)**n / (n! (a + n))``.
    """
    log_r = a * math.log(x) - _lgamma1p(a)
    total = 0.0
    term = 1.0
    for n in range(1, MAX_ITER):
        term *= -x / n
        add = term / (a + n)
        total += add
        if abs(add) < SERIES_RTOL * abs(total):
            break
    return -math.expm1(log_r) - math.exp(log_r) * a * total


def _continued_fraction_q(a: float, x: float) -> float:
    """Upper regularized gamma by modified Lentz on the Legendre fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < SERIES_RTOL:
            return _prefix(a, x) * h
    raise DomainError(f"incomplete gamma continued fraction did not converge for a={a}, x={x}")


def reg_gamma(a: float, x: float) -> tuple[float, float]:
    """Regularized lower and upper incomplete gamma ``(P(a, x), Q(a, x))``.

    Power series below ``x = a + 1``, continued fraction above; the smaller of
    the two is computed directly and the other as its complement.
    """
    a = float(a)
    x = float(x)
    if not (a > 0) or not (x >= 0) or math.isinf(a) or math.isnan(x):
        raise DomainError(f"reg_gamma needs a > 0 and x >= 0, got a={a}, x={x}")
    if x == 0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    if x < a + 1.0:
        p = min(_prefix(a, x) * _series(a, x), 1.0)
        if p <= 0.5:
            return p, 1.0 - p
        if x < 1.0:
            q = _small_q(a, x) if a < 1.0 else 1.0 - p
            return 1.0 - q, q
        # Q is the smaller one; the fraction still converges, if slowly, below a + 1
        q = min(_continued_fraction_q(a, x), 1.0)
        return 1.0 - q, q
    q = min(_continued_fraction_q(a, x), 1.0)
    return 1.0 - q, q


def analytic_zeta(params: Mm1mParams, arith: Arithmetic = FLOAT):
    """Mean steady-state abandonment rate ``lam - mu + theta / S(alpha, kappa)``."""
    with arith.context():
        lam, mu, theta, alpha, kappa = params.converted(arith)
        return lam - mu + theta / _series(alpha, kappa, arith)


def analytic_steady(params: Mm1mParams, n: int, arith: Arithmetic = FLOAT):
    """Steady-state probability ``p_n``, formed in log space."""
    if n < 0:
        raise DomainError("state index must be nonnegative")
    with arith.context():
        _, _, _, alpha, kappa = params.converted(arith)
        s = _series(alpha, kappa, arith)
        if arith.is_float:
            logp = n * math.log(kappa) - math.log(s) - (math.lgamma(alpha + n + 1) - math.lgamma(alpha))
            return math.exp(logp)
        if arith.kind == "mp":
            logp = n * mpmath.log(kappa) - mpmath.log(s) - (mpmath.loggamma(alpha + n + 1) - mpmath.loggamma(alpha))
            return mpmath.exp(logp)
        raise DomainError("analytic_steady has no exact-rational form")


def analytic_tail(params: Mm1mParams, n: int, arith: Arithmetic = FLOAT):
    """Tail mass ``1 - P_n = P(alpha+n+1, kappa) / P(alpha, kappa) = kappa p_n S(alpha+n+1, kappa)``."""
    with arith.context():
        _, _, _, alpha, kappa = params.converted(arith)
        return kappa * analytic_steady(params, n, arith) * _series(alpha + n + 1, kappa, arith)


def analytic_cumulative(params: Mm1mParams, n: int, arith: Arithmetic = FLOAT):
    with arith.context():
        return 1 - analytic_tail(params, n, arith)


def analytic_phi(params: Mm1mParams, n: int, arith: Arithmetic = FLOAT):
    """Marginal relative cost ``1 - gamma(alpha+n+1, kappa) / (gamma(alpha, kappa) kappa**(n+1))``."""
    if n < 0:
        raise DomainError("state index must be nonnegative")
    with arith.context():
        _, _, _, alpha, kappa = params.converted(arith)
        return 1 - _series(alpha + n + 1, kappa, arith) / _series(alpha, kappa, arith)
