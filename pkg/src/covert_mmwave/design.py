"""Covert operating point: smallest jamming ceiling meeting the covertness
target, and the target rate maximising the effective rate at that ceiling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Blockage, SystemConfig, path_loss
from .errors import DomainError, NoSolutionError
from .link import outage_probability
from .warden import expected_detection_error

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CovertDesign:
    epsilon: float
    pj_opt: float      # mW
    r_b_opt: float     # bits/use
    outage_opt: float
    rate_opt: float    # bits/use


def _check_epsilon(epsilon):
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")


def solve_pj_opt(cfg: SystemConfig, epsilon: float, tol: float = 1e-9,
                 max_expansions: int = 60) -> float:
    """Jamming ceiling (mW) at which E[P*_e,w] = 1 - epsilon.

    E[P*] increases with the ceiling, so the root is bracketed by geometric
    expansion from [1e-6, 1e6] mW and then bisected in log-power.
    """
    _check_epsilon(epsilon)
    target = 1.0 - epsilon

    def gap(pj):
        return expected_detection_error(cfg.with_pj_max(pj)) - target

    lo, hi = 1e-6, 1e6
    g_lo, g_hi = gap(lo), gap(hi)
    expansions = 0
    while g_lo > 0.0 or g_hi < 0.0:
        if expansions >= max_expansions:
            raise NoSolutionError(
                "covertness target not bracketed",
                target=target, achieved=(g_lo + target, g_hi + target),
                pj_range_mw=(lo, hi))
        if g_lo > 0.0:
            lo /= 10.0
            g_lo = gap(lo)
        if g_hi < 0.0:
            hi *= 10.0
            g_hi = gap(hi)
        expansions += 1
    if abs(g_lo) <= tol:
        return lo
    if abs(g_hi) <= tol:
        return hi

    log_lo, log_hi = math.log(lo), math.log(hi)
    while True:
        log_mid = 0.5 * (log_lo + log_hi)
        mid = math.exp(log_mid)
        g_mid = gap(mid)
        if abs(g_mid) <= tol or log_hi - log_lo < 1e-14:
            return mid
        if g_mid < 0.0:
            log_lo = log_mid
        else:
            log_hi = log_mid


def rate_ceiling(cfg: SystemConfig) -> float:
    """log2(1 + best-case SNR): LOS, both main lobes, no jamming."""
    gain = cfg.alice_first.main_gain * cfg.bob.main_gain
    snr = cfg.p_a * gain * path_loss(cfg.d_ab, Blockage.LOS, cfg.blockage) / cfg.sigma2_b
    return math.log2(1.0 + snr)


def best_effective_rate(cfg: SystemConfig, step: float = 0.02, rb_tol: float = 1e-4):
    """Maximise r_b (1 - outage(r_b)) over (0, rate_ceiling] at cfg's jamming ceiling.

    Returns (r_b, outage, rate). A grid pass locates the best cell, then
    golden-section search refines inside the two neighbouring cells.
    """
    r_cap = rate_ceiling(cfg)
    n = max(2, int(math.ceil(r_cap / step)))
    grid = np.minimum(step * np.arange(1, n + 1), r_cap)
    rates = grid * (1.0 - outage_probability(cfg, grid))
    i = int(np.argmax(rates))
    a = grid[i - 1] if i > 0 else 0.5 * grid[0]
    b = grid[i + 1] if i + 1 < len(grid) else grid[i]

    def objective(r):
        return r * (1.0 - outage_probability(cfg, r))

    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > rb_tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = objective(d)
    r_best = 0.5 * (a + b)
    candidates = [(float(objective(r_best)), float(r_best)),
                  (float(rates[i]), float(grid[i]))]
    rate, r_best = max(candidates)
    return r_best, float(outage_probability(cfg, r_best)), rate


def max_covert_rate(cfg: SystemConfig, epsilon: float, step: float = 0.02,
                    rb_tol: float = 1e-4) -> CovertDesign:
    """Best effective covert rate under E[P*_e,w] >= 1 - epsilon."""
    pj = solve_pj_opt(cfg, epsilon)
    r_b, out, rate = best_effective_rate(cfg.with_pj_max(pj), step, rb_tol)
    return CovertDesign(epsilon, pj, r_b, out, rate)
