"""Alice-Bob link metrics: outage probability, effective rate, ergodic capacity.

Bob's SINR is P_a g_af g_b L X / (P_J g_jam g_b L Y + sigma2_b) with X, Y
unit-mean gamma fading and P_J uniform on [0, pj_max]. The data-beam and
Bob's receive gains follow their beamsteering PMFs; the jamming beam reaches
Bob through a side lobe unless Willie (and hence Bob) sits inside it.

For capacity the three one-dimensional integrals J1 - J2 - J3 are never
formed separately: for nu = 1 two of them diverge individually. Writing
q = l eta sigma2_b / (P_a g_af g_b L) and kappa = g_jam g_b L pj_max / sigma2_b,
the conditional capacity is

    (1 / ln 2) sum_l C(nu,l) (-1)^l / q * E_Y[D(kappa Y; q)],
    D(u; q) = [eEi(q (1 + u)) - eEi(q) - ln(1 + u)] / u,

and D has the finite limit q eEi(q) as u -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import GainPMF, SystemConfig, blockage_mixture, eta, gain_pmf
from .errors import ConsistencyError, DomainError, NumericalError
from .quadrature import integrate_semi_infinite
from .specfun import binomial, e_ei

_LN2 = math.log(2.0)
_PROB_SLACK = 1e-9

# 8-point Gauss-Legendre on [0, 1] for the short-interval averages below
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W

# below this u, D(u; q) is computed as an average of q*eEi over [q, q(1+u)]
_SMALL_U = 0.05


@dataclass(frozen=True)
class LinkMetrics:
    r_b: float
    outage: float
    effective_rate: float
    ergodic_capacity: float


def bob_jammer_pmf(cfg: SystemConfig) -> GainPMF:
    if cfg.willie_in_main_lobe:
        return gain_pmf(cfg.alice_second)
    return GainPMF.deterministic(cfg.alice_second.side_gain)


def _link_components(cfg: SystemConfig):
    """Yield (weight, path loss, nu, g_af, g_b, g_jam) over all discrete states."""
    data = gain_pmf(cfg.alice_first)
    rx = gain_pmf(cfg.bob)
    jam = bob_jammer_pmf(cfg)
    for p_state, loss, nu in blockage_mixture(cfg.d_ab, cfg.blockage, cfg.fading):
        for g_af, b_af in data:
            for g_b, b_b in rx:
                for g_j, b_j in jam:
                    w = p_state * b_af * b_b * b_j
                    if w > 0.0:
                        yield w, loss, nu, g_af, g_b, g_j


def _v_term(nu, x):
    """Jamming average V as a function of x = pj_max l eta gamma g_jam / (nu P_a g_af)."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0.0, x, 1.0)
    if nu == 1:
        v = np.log1p(safe) / safe
    else:
        v = -np.expm1((1 - nu) * np.log1p(safe)) / ((nu - 1) * safe)
    return np.where(x > 0.0, v, 1.0)


def _clamp(value, what):
    value = np.asarray(value, dtype=float)
    bad = (value < -_PROB_SLACK) | (value > 1.0 + _PROB_SLACK)
    if np.any(bad):
        raise ConsistencyError(f"{what} left [0, 1]", value=value[bad].tolist())
    return np.clip(value, 0.0, 1.0)


def outage_probability(cfg: SystemConfig, r_b):
    """Probability that Bob's SINR misses 2^r_b - 1; ``r_b`` may be an array."""
    r = np.asarray(r_b, dtype=float)
    if np.any(~(r > 0.0)):
        raise DomainError("target rate must be > 0")
    if not cfg.pj_max >= 0.0:
        raise DomainError("pj_max must be >= 0")
    gamma_th = np.expm1(r * _LN2)
    total = np.zeros_like(r)
    for w, loss, nu, g_af, g_b, g_j in _link_components(cfg):
        e = eta(nu)
        inner = np.ones_like(r)
        for l in range(1, nu + 1):
            noise = np.exp(-l * e * gamma_th * cfg.sigma2_b / (cfg.p_a * g_af * g_b * loss))
            x = cfg.pj_max * l * e * gamma_th * g_j / (nu * cfg.p_a * g_af)
            inner = inner + binomial(nu, l) * (-1) ** l * noise * _v_term(nu, x)
        total = total + w * inner
    out = _clamp(total, "outage probability")
    return float(out) if out.ndim == 0 else out


def effective_rate(cfg: SystemConfig, r_b):
    out = outage_probability(cfg, r_b)
    return np.asarray(r_b, dtype=float) * (1.0 - out) if np.ndim(r_b) else r_b * (1.0 - out)


def _mean_e_ei(a, b):
    """Average of eEi over [a, b] (a, b > 0) by 8-point Gauss-Legendre."""
    pts = a[..., None] + (b - a)[..., None] * _GL_X
    return e_ei(pts) @ _GL_W


def combined_bracket(u, q: float):
    """D(u; q) = [eEi(q(1+u)) - eEi(q) - ln(1+u)] / u, with D(0; q) = q eEi(q)."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = u < _SMALL_U
    if small.any():
        us = u[small]
        qa = np.full_like(us, q)
        # D is q times the mean of eEi over [q, q(1+u)]
        out[small] = q * _mean_e_ei(qa, q * (1.0 + us))
    big = ~small
    if big.any():
        ub = u[big]
        out[big] = (e_ei(q * (1.0 + ub)) - e_ei(q) - np.log1p(ub)) / ub
    return out


def _gamma_pdf(y, nu):
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore"):
        logf = nu * math.log(nu) + (nu - 1) * np.log(y) - nu * y - math.lgamma(nu)
    return np.where(y > 0.0, np.exp(logf), 1.0 if nu == 1 else 0.0)


def capacity_integrand(y, q: float, kappa: float, nu: int):
    """E_Y integrand D(kappa y; q) f_Y(y) of the combined J1 - J2 - J3 form."""
    y = np.asarray(y, dtype=float)
    return combined_bracket(kappa * y, q) * _gamma_pdf(y, nu)


def _divided_difference_e_ei(a: float, b: float) -> float:
    """[eEi(b) - eEi(a)] / (b - a), also valid as b -> a."""
    if abs(b - a) <= 1e-3 * min(a, b):
        lo, hi = np.array([min(a, b)]), np.array([max(a, b)])
        pts = lo[..., None] + (hi - lo)[..., None] * _GL_X
        # mean of the derivative eEi'(s) = eEi(s) + 1/s
        return float(((e_ei(pts) + 1.0 / pts) @ _GL_W)[0])
    return (e_ei(b) - e_ei(a)) / (b - a)


def jamming_integrals_nu2(q: float, kappa: float):
    """J1, J2, J3 for nu = 2 in closed form.

    With p = q kappa (the jamming exponent), J1 = 4/(p-2) [eEi(2/kappa) - eEi(q)],
    J2 = 2 eEi(q), J3 = -2 eEi(2/kappa). J1 is evaluated through a divided
    difference, which also covers its limit -2 (q eEi(q) + 1) at p = 2.
    """
    if not (q > 0 and kappa > 0):
        raise DomainError("jamming_integrals_nu2 needs q, kappa > 0")
    a = 2.0 / kappa
    j1 = -4.0 / kappa * _divided_difference_e_ei(q, a)
    return j1, 2.0 * e_ei(q), -2.0 * e_ei(a)


def _conditional_capacity_nu2(q_l, kappa):
    # (J1 - J2 - J3) * P_a g_af / (g_jam pj_max l eta) = (J1 - J2 - J3) / p
    # = 2 [eEi(2/kappa) - eEi(q)] / (p - 2) = -(2/kappa) * dd(q, 2/kappa)
    return -2.0 / kappa * _divided_difference_e_ei(q_l, 2.0 / kappa)


def _conditional_capacity_quadrature(q_l, kappa, nu, rtol):
    val, _err = integrate_semi_infinite(
        lambda y: capacity_integrand(y, q_l, kappa, nu), rtol=rtol, limit=4000)
    return val / q_l


def conditional_capacity(nu: int, q: float, kappa: float, method: str = "auto",
                         rtol: float = 1e-10) -> float:
    """Ergodic capacity (bits/use) given blockage state and all three gains.

    ``q = eta sigma2_b / (P_a g_af g_b L)`` (the l = 1 noise exponent) and
    ``kappa = g_jam g_b L pj_max / sigma2_b`` (peak jamming-to-noise ratio).
    """
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" and nu != 2:
        raise DomainError("closed-form capacity exists only for nu = 2")
    total = 0.0
    for l in range(1, nu + 1):
        q_l = l * q
        coeff = binomial(nu, l) * (-1) ** l
        if kappa == 0.0:
            term = e_ei(q_l)
        elif nu == 2 and method != "quadrature":
            term = _conditional_capacity_nu2(q_l, kappa)
        else:
            term = _conditional_capacity_quadrature(q_l, kappa, nu, rtol)
        total += coeff * term
    return total / _LN2


def ergodic_capacity(cfg: SystemConfig, method: str = "auto", rtol: float = 1e-10) -> float:
    """E[log2(1 + SINR)] of the Alice-Bob link in bits per channel use."""
    if not cfg.pj_max >= 0.0:
        raise DomainError("pj_max must be >= 0")
    total = 0.0
    for w, loss, nu, g_af, g_b, g_j in _link_components(cfg):
        q = eta(nu) * cfg.sigma2_b / (cfg.p_a * g_af * g_b * loss)
        kappa = g_j * g_b * loss * cfg.pj_max / cfg.sigma2_b
        try:
            total += w * conditional_capacity(nu, q, kappa, method, rtol)
        except NumericalError as exc:
            exc.diagnostics.update(nu=nu, q=q, kappa=kappa)
            raise
    if total < 0.0:
        if total < -1e-12:
            raise ConsistencyError("negative ergodic capacity", value=total)
        total = 0.0
    return total


def link_metrics(cfg: SystemConfig, r_b: float) -> LinkMetrics:
    out = outage_probability(cfg, r_b)
    return LinkMetrics(r_b, out, r_b * (1.0 - out), ergodic_capacity(cfg))
