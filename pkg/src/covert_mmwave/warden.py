"""Willie's radiometer: per-realization optimum and Alice's expected view.

Willie compares received power against a threshold without knowing the
jamming power, which is uniform on [0, pj_max] per block. For a fixed channel
his best achievable error is zero or ``1 - S_f / S_j``; Alice only knows the
channel statistics, so she averages that over blockage, beamsteering gains
and fading using the Alzer CDF approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import GainPMF, SystemConfig, blockage_mixture, eta, gain_pmf
from .errors import ConsistencyError, DomainError
from .specfun import binomial, factorial, gamma_int

# below this jamming ceiling (mW) the expected error is returned as its limit, 0
PJ_ZERO_LIMIT = 1e-12
_PROB_SLACK = 1e-9


@dataclass(frozen=True)
class RealizationInputs:
    """Received powers at Willie for one block (path loss included)."""

    s_f: float  # data beam power, P_a * G_aw,f * L_aw * |h_f|^2
    s_j: float  # jamming ceiling power, P_J^max * G_aw,s * L_aw * |h_s|^2
    sigma2_w: float

    def __post_init__(self):
        if self.s_f < 0 or self.s_j < 0 or not self.sigma2_w > 0:
            raise DomainError("need s_f >= 0, s_j >= 0 and sigma2_w > 0")

    @property
    def lambda1(self):
        return self.s_j + self.sigma2_w

    @property
    def lambda2(self):
        return self.s_f + self.sigma2_w

    @property
    def lambda3(self):
        return self.lambda2 + self.s_j


@dataclass(frozen=True)
class DetectionResult:
    p_e_star: float
    tau_lo: float
    tau_hi: float


def detection_error_star(r: RealizationInputs) -> DetectionResult:
    """Minimum of P_FA + P_MD over thresholds, and the interval attaining it."""
    if r.s_j == 0.0:
        raise DomainError("jamming power must be positive for the optimal detector")
    l1, l2 = r.lambda1, r.lambda2
    if l1 < l2:
        return DetectionResult(0.0, l1, l2)
    return DetectionResult(1.0 - r.s_f / r.s_j, l2, l1)


def detection_error_star_array(s_f, s_j):
    """Vectorised ``p_e_star`` (noise cancels out of the comparison)."""
    s_f = np.asarray(s_f, dtype=float)
    s_j = np.asarray(s_j, dtype=float)
    covered = (s_j >= s_f) & (s_j > 0.0)
    ratio = np.divide(s_f, s_j, out=np.zeros_like(s_f), where=covered)
    return np.where(covered, 1.0 - ratio, 0.0)


def detector_curves(r: RealizationInputs, tau):
    """False-alarm, missed-detection and total error of threshold ``tau``."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("threshold must be >= 0")
    if r.s_j == 0.0:
        # no jamming: H0 power is exactly sigma2_w, H1 power exactly lambda2
        p_fa = np.where(tau < r.sigma2_w, 1.0, 0.0)
        p_md = np.where(tau > r.lambda2, 1.0, 0.0)
    else:
        p_fa = np.clip(1.0 - (tau - r.sigma2_w) / r.s_j, 0.0, 1.0)
        p_md = np.clip((tau - r.lambda2) / r.s_j, 0.0, 1.0)
    p_e = p_fa + p_md
    if p_e.ndim == 0:
        return float(p_fa), float(p_md), float(p_e)
    return p_fa, p_md, p_e


def _clamp_probability(value, what):
    if -_PROB_SLACK <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + _PROB_SLACK:
        return 1.0
    if not 0.0 <= value <= 1.0:
        raise ConsistencyError(f"{what} left [0, 1]", value=value)
    return value


def _s_term(nu, c1):
    """S(nu, g): sum over l >= 1 of C(nu,l) (-1)^l (1 + l eta c1 / nu)^(-nu)."""
    e = eta(nu)
    return sum(binomial(nu, l) * (-1) ** l * (1.0 + l * e * c1 / nu) ** (-nu)
               for l in range(1, nu + 1))


def _i_term(nu, l, c1):
    e = eta(nu)
    z = l * e * c1 / nu
    if nu == 1:
        return math.log1p(z)
    # 1 - (1 + z)^(1 - nu), cancellation-free for small z
    return factorial(nu - 2) / nu ** (nu - 1) * -math.expm1((1 - nu) * math.log1p(z))


def conditional_detection_error(nu: int, c1: float) -> float:
    """E[P*] given the blockage state and both array gains.

    ``c1 = pj_max * g_jam / (p_a * g_data)`` is the jamming-to-data power
    ratio seen by Willie before fading. Implements the two-bracket product
    [1 + S] * [1 - S + (1/c1) * nu^nu / (eta Gamma(nu)) * sum C(nu,l)(-1)^l I / l].
    """
    if c1 < 0:
        raise DomainError("c1 must be >= 0")
    if c1 == 0.0:
        return 0.0
    e = eta(nu)
    s = _s_term(nu, c1)
    weighted = sum(binomial(nu, l) * (-1) ** l / l * _i_term(nu, l, c1)
                   for l in range(1, nu + 1))
    t = nu ** nu / (e * gamma_int(nu)) * weighted / c1
    return (1.0 + s) * (1.0 - s + t)


def willie_gain_pmfs(cfg: SystemConfig):
    """(jamming-beam gain PMF, data-beam gain PMF) as seen by Willie."""
    if cfg.jammer_gain_mode == "deterministic_main":
        jam = GainPMF.deterministic(cfg.alice_second.main_gain)
    else:
        jam = gain_pmf(cfg.alice_second)
    if cfg.willie_in_main_lobe:
        data = gain_pmf(cfg.alice_first)
    else:
        data = GainPMF.deterministic(cfg.alice_first.side_gain)
    return jam, data


def expected_detection_error(cfg: SystemConfig) -> float:
    """Alice's expectation of Willie's minimum detection error, E[P*_e,w]."""
    if not cfg.pj_max > 0.0:
        raise DomainError(f"pj_max must be > 0, got {cfg.pj_max}")
    if cfg.pj_max < PJ_ZERO_LIMIT:
        return 0.0
    jam, data = willie_gain_pmfs(cfg)
    total = 0.0
    for p_state, _loss, nu in blockage_mixture(cfg.d_aw, cfg.blockage, cfg.fading):
        for g_s, b_s in jam:
            for g_f, b_f in data:
                if b_s == 0.0 or b_f == 0.0:
                    continue
                c1 = cfg.pj_max * g_s / (cfg.p_a * g_f)
                total += p_state * b_s * b_f * conditional_detection_error(nu, c1)
    return _clamp_probability(total, "expected detection error")
