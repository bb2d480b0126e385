"""Special functions: exponential integral, its scaled form, and helpers.

All routines are double precision. ``e_ei`` is vectorised because the
ergodic-capacity integrands evaluate it on whole quadrature panels.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286060651209008240243

_EPS = 2.220446049250313e-16
_TINY = 1e-300

# |x| below this uses the power series for Ei(-x); above it the E1 continued
# fraction converges quickly and avoids the alternating-series cancellation.
_SERIES_NEG_MAX = 1.0
# Ei(x) for x > 0: series below, asymptotic expansion above.
_SERIES_POS_MAX = 40.0


def _ein(t):
    """Entire function Ein(t) = sum_{k>=1} (-1)^(k+1) t^k / (k k!), |t| <= 1."""
    t = np.asarray(t, dtype=float)
    term = np.array(t, copy=True)  # (-1)^(k+1) t^k / k!  at k = 1
    total = np.array(t, copy=True)
    for k in range(2, 30):
        term = -term * t / k
        total = total + term / k
    return total


def _e1_scaled_cf(t):
    """e^t E1(t) for t > 1 via the modified Lentz continued fraction."""
    t = np.asarray(t, dtype=float)
    b = t + 1.0
    c = np.full_like(t, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(t.shape, dtype=bool)
    for i in range(1, 500):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > _EPS
        if not active.any():
            break
    return h


def _e1_scaled(t):
    """e^t E1(t) for t > 0, vectorised, no overflow for any finite t."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = t <= _SERIES_NEG_MAX
    if small.any():
        ts = t[small]
        out[small] = np.exp(ts) * (-EULER_GAMMA - np.log(ts) + _ein(ts))
    if (~small).any():
        out[~small] = _e1_scaled_cf(t[~small])
    return out


def exp_integral_ei(x: float) -> float:
    """Exponential integral Ei(x) (Cauchy principal value for x > 0).

    Raises DomainError at x = 0 where Ei has a logarithmic singularity.
    """
    x = float(x)
    if x == 0.0 or math.isnan(x):
        raise DomainError(f"Ei is undefined at x={x}")
    if x < 0.0:
        t = -x
        if t <= _SERIES_NEG_MAX:
            return EULER_GAMMA + math.log(t) - float(_ein(t))
        return -math.exp(-t) * float(_e1_scaled_cf(np.array([t]))[0])
    if x < _SERIES_POS_MAX:
        term = 1.0
        total = 0.0
        for k in range(1, 500):
            term *= x / k
            contrib = term / k
            total += contrib
            if contrib < _EPS * total:
                break
        return EULER_GAMMA + math.log(x) + total
    # asymptotic: Ei(x) ~ e^x / x * sum k!/x^k, truncated at the smallest term
    term = 1.0
    total = 1.0
    for k in range(1, int(x)):
        nxt = term * k / x
        if nxt > term:
            break
        term = nxt
        total += term
        if term < _EPS * total:
            break
    try:
        return math.exp(x) / x * total
    except OverflowError:
        return math.inf


def e_ei(x):
    """Scaled exponential integral eEi(x) = e^x Ei(-x) for x > 0.

    Accepts scalars or arrays; never forms e^x explicitly for x > 1, so the
    result stays finite (about -1/x) for arbitrarily large arguments.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError("eEi requires x > 0")
    out = -_e1_scaled(arr)
    if np.ndim(x) == 0:
        return float(out)
    return out


def erf(x: float) -> float:
    """Error function."""
    return math.erf(x)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient n choose k."""
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"binomial({n}, {k}) requires 0 <= k <= n")
    return math.comb(n, k)


def factorial(n: int) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"factorial requires a non-negative integer, got {n}")
    return math.factorial(int(n))


def gamma_int(n: int) -> int:
    """Gamma(n) = (n-1)! for a positive integer n."""
    if int(n) != n or n < 1:
        raise DomainError(f"gamma_int requires a positive integer, got {n}")
    return math.factorial(int(n) - 1)


def scaled_ei_integral(a: float, c1: float, c2: float) -> float:
    """Closed form of the integral of e^(-a x) Ei(a x) over [c1, c2], a < 0.

    Equals [eEi(-a c2) - eEi(-a c1) - ln(c2/c1)] / (-a).
    """
    if not a < 0.0:
        raise DomainError(f"scaled_ei_integral requires a < 0, got a={a}")
    if not (c1 > 0.0 and c2 > 0.0):
        raise DomainError(f"scaled_ei_integral requires c1, c2 > 0, got {c1}, {c2}")
    if c1 == c2:
        return 0.0
    return (e_ei(-a * c2) - e_ei(-a * c1) - math.log(c2 / c1)) / (-a)
