"""Vectorised adaptive Gauss-Kronrod (G7/K15) quadrature.

Used by the library's own integral evaluations. The verification oracles
deliberately use scipy's QUADPACK instead so the two routes stay independent.
"""

from __future__ import annotations

import heapq

import numpy as np

from .errors import NumericalError

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
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# symmetric 15-point layout: -x1..-x7, 0, x7..x1
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_WK = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_WG15 = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (x2, x4, x6 and 0)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[[13, 11, 9]] = _WG[:3]


def _panels(f, lo, hi):
    """Kronrod estimates and error bounds for a batch of intervals."""
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise NumericalError("integrand is not finite", at=float(bad))
    k15 = half * (fx @ _WK)
    g7 = half * (fx @ _WG15)
    return k15, np.abs(k15 - g7)


def integrate(f, a: float, b: float, rtol: float = 1e-10, atol: float = 0.0,
              limit: int = 2000, initial: int = 8):
    """Integrate a vectorised ``f`` over the finite interval [a, b].

    Returns ``(value, error_estimate)``. Raises NumericalError when the error
    target is not met within ``limit`` subintervals.
    """
    if a == b:
        return 0.0, 0.0
    if b < a:
        val, err = integrate(f, b, a, rtol, atol, limit, initial)
        return -val, err
    edges = np.linspace(a, b, initial + 1)
    k, e = _panels(f, edges[:-1], edges[1:])
    heap = [(-ei, lo, hi, ki) for lo, hi, ki, ei in zip(edges[:-1], edges[1:], k, e)]
    heapq.heapify(heap)
    total = float(np.sum(k))
    err = float(np.sum(e))
    while err > max(atol, rtol * abs(total)):
        if len(heap) >= limit:
            raise NumericalError("adaptive quadrature did not converge",
                                 interval=(a, b), value=total, error=err,
                                 subintervals=len(heap))
        # split the worst few intervals together to amortise the f() call
        batch = [heapq.heappop(heap) for _ in range(min(8, len(heap)))]
        lo = np.array([t[1] for t in batch])
        hi = np.array([t[2] for t in batch])
        mid = 0.5 * (lo + hi)
        if np.any((mid <= lo) | (mid >= hi)):
            raise NumericalError("quadrature interval collapsed to roundoff",
                                 value=total, error=err)
        k_new, e_new = _panels(f, np.concatenate([lo, mid]), np.concatenate([mid, hi]))
        for t in batch:
            total -= t[3]
            err += t[0]
        n = len(batch)
        for j in range(n):
            heapq.heappush(heap, (-e_new[j], lo[j], mid[j], k_new[j]))
            heapq.heappush(heap, (-e_new[n + j], mid[j], hi[j], k_new[n + j]))
        total += float(np.sum(k_new))
        err += float(np.sum(e_new))
    # re-sum to shed accumulated update roundoff
    total = float(sum(t[3] for t in heap))
    return total, err


def integrate_semi_infinite(f, a: float = 0.0, rtol: float = 1e-10,
                            atol: float = 0.0, limit: int = 2000):
    """Integrate ``f`` over [a, inf) through the map y = a + t / (1 - t)."""

    def mapped(t):
        one_minus = 1.0 - t
        return f(a + t / one_minus) / (one_minus * one_minus)

    return integrate(mapped, 0.0, 1.0, rtol=rtol, atol=atol, limit=limit)
