"""Independent checks for every closed form.

Two tiers:

* Monte Carlo from the generative model (exact gamma fading, uniform jamming
  power, random blockage and beamsteering gains). Disagreement with a closed
  form bounds the Alzer approximation error plus sampling noise.
* Nested adaptive quadrature of the expressions that precede each closed
  form, with the Alzer CDF substituted exactly where the derivation does.
  Disagreement here points at an algebra or transcription error.

The quadrature references use scipy's QUADPACK and scipy's E1, never the
package's own quadrature or exponential-integral code.

Monte Carlo work is split into fixed-size blocks; block ``i`` draws from
substream ``(seed, i)`` and block statistics are merged in index order, so
the estimate does not depend on how many workers run the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .channel import (Blockage, SystemConfig, blockage_mixture, eta, gain_pmf, p_los,
                      path_loss, substream)
from .errors import DomainError, NumericalError
from .link import _link_components, bob_jammer_pmf
from .warden import detection_error_star_array, willie_gain_pmfs

BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_samples: int
    seed: int


# -- Monte Carlo -------------------------------------------------------------

def _draw_gain(rng, pmf, size):
    """Sample a two-point (or deterministic) gain PMF."""
    values, probs = pmf.values, pmf.probs
    u = rng.random(size)
    if len(values) == 1:
        return np.full(size, values[0])
    return np.where(u < probs[0], values[0], values[1])


def _draw_blockage(rng, cfg, d, size):
    los = rng.random(size) < p_los(d, cfg.blockage)
    nu = np.where(los, cfg.fading.nu_l, cfg.fading.nu_n)
    loss = np.where(los, path_loss(d, Blockage.LOS, cfg.blockage),
                    path_loss(d, Blockage.NLOS, cfg.blockage))
    return nu, loss


def _draw_fading(rng, nu, alzer=False):
    if alzer:
        # inverse of (1 - exp(-eta x))^nu
        etas = np.empty(nu.shape)
        for v in np.unique(nu):
            etas[nu == v] = eta(int(v))
        u = rng.random(nu.shape)
        return -np.log1p(-u ** (1.0 / nu)) / etas
    return rng.gamma(nu, 1.0 / nu)


def _willie_block(cfg, rng, size):
    nu, loss = _draw_blockage(rng, cfg, cfg.d_aw, size)
    jam, data = willie_gain_pmfs(cfg)
    g_s = _draw_gain(rng, jam, size)
    g_f = _draw_gain(rng, data, size)
    h_f = _draw_fading(rng, nu)
    h_s = _draw_fading(rng, nu)
    s_f = cfg.p_a * g_f * loss * h_f
    s_j = cfg.pj_max * g_s * loss * h_s
    return detection_error_star_array(s_f, s_j)


def _bob_sinr(cfg, rng, size, alzer_desired=False):
    nu, loss = _draw_blockage(rng, cfg, cfg.d_ab, size)
    g_af = _draw_gain(rng, gain_pmf(cfg.alice_first), size)
    g_b = _draw_gain(rng, gain_pmf(cfg.bob), size)
    g_j = _draw_gain(rng, bob_jammer_pmf(cfg), size)
    p_j = cfg.pj_max * rng.random(size)
    h_f = _draw_fading(rng, nu, alzer=alzer_desired)
    h_s = _draw_fading(rng, nu)
    signal = cfg.p_a * g_af * g_b * loss * h_f
    interference = p_j * g_j * g_b * loss * h_s
    return signal / (interference + cfg.sigma2_b)


def _block_stats(values):
    n = values.size
    mean = float(np.mean(values))
    m2 = float(np.sum((values - mean) ** 2))
    return n, mean, m2


def _run_blocks(sampler, n, seed, workers):
    if n < 1:
        raise DomainError("need at least one sample")
    sizes = [min(BLOCK_SIZE, n - start) for start in range(0, n, BLOCK_SIZE)]

    def one(i):
        return _block_stats(sampler(substream(seed, i), sizes[i]))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(one, range(len(sizes))))
    else:
        stats = [one(i) for i in range(len(sizes))]
    # Chan et al. pairwise merge, in block order
    count, mean, m2 = stats[0]
    for nb, mb, m2b in stats[1:]:
        total = count + nb
        delta = mb - mean
        mean += delta * nb / total
        m2 += m2b + delta * delta * count * nb / total
        count = total
    var = m2 / (count - 1) if count > 1 else 0.0
    return McEstimate(mean, math.sqrt(var / count), count, seed)


def mc_expected_detection_error(cfg: SystemConfig, n: int, seed: int,
                                workers: int = 1) -> McEstimate:
    """Sample mean of Willie's exact per-block minimum error."""
    return _run_blocks(lambda rng, m: _willie_block(cfg, rng, m), n, seed, workers)


def mc_outage(cfg: SystemConfig, r_b: float, n: int, seed: int, workers: int = 1,
              alzer_desired: bool = False) -> McEstimate:
    gamma_th = 2.0 ** r_b - 1.0
    return _run_blocks(
        lambda rng, m: (_bob_sinr(cfg, rng, m, alzer_desired) < gamma_th).astype(float),
        n, seed, workers)


def mc_ergodic_capacity(cfg: SystemConfig, n: int, seed: int, workers: int = 1,
                        alzer_desired: bool = False) -> McEstimate:
    """Sample mean of log2(1 + SINR).

    ``alzer_desired`` draws the data-path fading from the Alzer CDF instead of
    the gamma law; the closed form should then match up to sampling noise.
    """
    return _run_blocks(
        lambda rng, m: np.log2(1.0 + _bob_sinr(cfg, rng, m, alzer_desired)),
        n, seed, workers)


# -- nested quadrature references -------------------------------------------

def _quad(f, a, b, tol, what):
    val, err, *rest = integrate.quad(f, a, b, epsabs=tol, epsrel=tol, limit=500,
                                     full_output=1)
    if len(rest) > 1 and "roundoff" not in str(rest[1]) and err > 100 * tol * max(1.0, abs(val)):
        raise NumericalError(f"reference quadrature failed: {what}",
                             value=val, error=err, message=rest[1])
    return val


def _gamma_pdf(y, nu):
    if y <= 0.0:
        return 1.0 if nu == 1 else 0.0
    return math.exp(nu * math.log(nu) + (nu - 1) * math.log(y) - nu * y - math.lgamma(nu))


def _alzer_pdf(x, nu, e):
    t = math.exp(-e * x)
    return nu * e * t * (1.0 - t) ** (nu - 1)


def _alzer_cdf(x, nu, e):
    return (-math.expm1(-e * x)) ** nu


def alzer_ref_detection(cfg: SystemConfig, tol: float = 1e-10) -> float:
    """E[P*_e,w] by integrating the probability and truncated ratio moment.

    Per state: P = Pr(X <= c1 Y) and T = E[(X/Y) 1{X <= c1 Y}], with X from
    the Alzer law and Y exact gamma; the state's value is P (1 - T / c1).
    """
    if tol < 1e-10:
        raise DomainError("tol must be >= 1e-10")
    if not cfg.pj_max > 0:
        raise DomainError("pj_max must be > 0")
    jam, data = willie_gain_pmfs(cfg)
    total = 0.0
    for p_state, _loss, nu in blockage_mixture(cfg.d_aw, cfg.blockage, cfg.fading):
        e = eta(nu)
        for g_s, b_s in jam:
            for g_f, b_f in data:
                if b_s * b_f == 0.0:
                    continue
                c1 = cfg.pj_max * g_s / (cfg.p_a * g_f)
                prob = _quad(lambda y: _alzer_cdf(c1 * y, nu, e) * _gamma_pdf(y, nu),
                             0.0, np.inf, tol, "Pr(lambda1 >= lambda2)")

                def inner(y):
                    if y == 0.0:
                        return 0.0
                    v1 = _quad(lambda x: x * _alzer_pdf(x, nu, e), 0.0, c1 * y,
                               tol * 1e-2, "truncated first moment")
                    return v1 / y * _gamma_pdf(y, nu)

                trunc = _quad(inner, 0.0, np.inf, tol, "truncated ratio moment")
                total += p_state * b_s * b_f * prob * (1.0 - trunc / c1)
    return total


def alzer_ref_outage(cfg: SystemConfig, r_b: float, tol: float = 1e-10) -> float:
    """Outage by averaging the Alzer CDF over jamming power and jammer fading.

    Per state: (1/pj_max) int_0^pj_max int_0^inf F(c2 t y + c3) f_Y(y) dy dt.
    """
    if tol < 1e-10:
        raise DomainError("tol must be >= 1e-10")
    if not r_b > 0:
        raise DomainError("r_b must be > 0")
    gamma_th = 2.0 ** r_b - 1.0
    total = 0.0
    for w, loss, nu, g_af, g_b, g_j in _link_components(cfg):
        e = eta(nu)
        c2 = gamma_th * g_j / (cfg.p_a * g_af)
        c3 = gamma_th * cfg.sigma2_b / (cfg.p_a * g_af * g_b * loss)

        def given_power(t):
            return _quad(lambda y: _alzer_cdf(c2 * t * y + c3, nu, e) * _gamma_pdf(y, nu),
                         0.0, np.inf, tol * 1e-2, "outage inner")

        if cfg.pj_max == 0.0:
            cond = given_power(0.0)
        else:
            cond = _quad(given_power, 0.0, cfg.pj_max, tol, "outage over P_J") / cfg.pj_max
        total += w * cond
    return total


def _scaled_e1(x):
    """e^x E1(x) from scipy, with the asymptotic series where exp overflows."""
    if x < 600.0:
        return math.exp(x) * float(special.exp1(x))
    s, term = 1.0, 1.0
    for k in range(1, 20):
        term *= -k / x
        s += term
    return s / x


def quadrature_ref_capacity(cfg: SystemConfig, tol: float = 1e-10) -> float:
    """Ergodic capacity from the jamming-power average before the Ei integral identity.

    Per state: (1/(pj_max ln 2)) sum_l C(nu,l)(-1)^l
    E_Y[int_0^pj_max eEi(l eta (c2 Y t + c3)) dt].
    """
    if tol < 1e-10:
        raise DomainError("tol must be >= 1e-10")
    if not cfg.pj_max > 0:
        raise DomainError("pj_max must be > 0")
    total = 0.0
    for w, loss, nu, g_af, g_b, g_j in _link_components(cfg):
        e = eta(nu)
        c2 = g_j / (cfg.p_a * g_af)
        c3 = cfg.sigma2_b / (cfg.p_a * g_af * g_b * loss)

        def over_y(y, l):
            inner = _quad(lambda t: -_scaled_e1(l * e * (c2 * y * t + c3)),
                          0.0, cfg.pj_max, tol * 1e-2, "capacity over P_J")
            return inner * _gamma_pdf(y, nu)

        cond = 0.0
        for l in range(1, nu + 1):
            # the y-integrand varies on the scale 1/(c2 pj_max); split there
            knee = max(1e-3, min(1.0, c3 / (c2 * cfg.pj_max)))
            part = (_quad(lambda y: over_y(y, l), 0.0, knee, tol, "capacity over Y")
                    + _quad(lambda y: over_y(y, l), knee, np.inf, tol, "capacity over Y"))
            cond += math.comb(nu, l) * (-1) ** l * part
        total += w * cond / (cfg.pj_max * math.log(2.0))
    return total
