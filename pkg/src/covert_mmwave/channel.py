"""Channel and antenna primitives for the dual-beam mmWave link.

Blockage, path loss, the two-point directivity-gain distribution produced by
Gaussian beamsteering error, Nakagami power fading, and the Alzer CDF
approximation that the closed forms are built on.

Units: powers in mW, gains and path losses linear, angles in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import DomainError
from .specfun import binomial, erf


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


# dBm <-> mW is the same map
dbm_to_mw = db_to_linear
mw_to_dbm = linear_to_db


class Blockage(str, Enum):
    LOS = "L"
    NLOS = "N"


@dataclass(frozen=True)
class AntennaPattern:
    """Sectored beam: gain ``main_gain`` inside ``beamwidth``, ``side_gain`` outside.

    ``steer_sigma`` is the standard deviation (radians) of the zero-mean
    Gaussian beamsteering error.
    """

    main_gain: float
    side_gain: float
    beamwidth: float
    steer_sigma: float = 0.0

    def __post_init__(self):
        if not self.main_gain > self.side_gain > 0.0:
            raise DomainError(
                f"pattern needs main_gain > side_gain > 0, got "
                f"{self.main_gain}, {self.side_gain}")
        if not 0.0 < self.beamwidth < 2.0 * math.pi:
            raise DomainError(f"beamwidth must lie in (0, 2pi), got {self.beamwidth}")
        if not self.steer_sigma >= 0.0:
            raise DomainError(f"steer_sigma must be >= 0, got {self.steer_sigma}")


@dataclass(frozen=True)
class GainPMF:
    """Two-point directivity gain: ``values[k]`` with probability ``probs[k]``."""

    values: tuple
    probs: tuple

    def __post_init__(self):
        if abs(sum(self.probs) - 1.0) > 1e-12:
            raise DomainError(f"gain probabilities sum to {sum(self.probs)}")

    def __iter__(self):
        return iter(zip(self.values, self.probs))

    @classmethod
    def deterministic(cls, value):
        return cls((value,), (1.0,))


@dataclass(frozen=True)
class BlockageParams:
    decay_length: float = 200.0
    alpha_l: float = 2.0
    alpha_n: float = 4.0
    c_l: float = 1e-7
    c_n: float = 1e-7

    def __post_init__(self):
        for name in ("decay_length", "alpha_l", "alpha_n", "c_l", "c_n"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be > 0")


@dataclass(frozen=True)
class FadingParams:
    """Integer Nakagami shapes for LOS and NLOS links (unit mean power)."""

    nu_l: int = 3
    nu_n: int = 2

    def __post_init__(self):
        for name in ("nu_l", "nu_n"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise DomainError(f"{name} must be an integer >= 1, got {v!r}")
            object.__setattr__(self, name, int(v))

    def shape(self, state: Blockage) -> int:
        return self.nu_l if state is Blockage.LOS else self.nu_n


JAMMER_GAIN_MODES = ("averaged", "deterministic_main")


def _default_pattern():
    return AntennaPattern(db_to_linear(15.0), db_to_linear(-5.0),
                          math.radians(30.0), math.radians(5.0))


@dataclass(frozen=True)
class SystemConfig:
    """Every physical parameter of the Alice/Bob/Willie setup, in linear units.

    ``alice_first`` carries data to Bob, ``alice_second`` carries the jamming
    beam toward Willie, ``bob`` is Bob's receive pattern.

    ``willie_in_main_lobe``: Willie sits inside the data beam (equivalently
    Bob inside the jamming beam), so Willie's data gain and Bob's jamming gain
    are both drawn from their beamsteering PMFs instead of fixed side lobes.
    ``jammer_gain_mode="deterministic_main"`` models the multi-array jammer
    whose gain toward Willie is always the main lobe.
    """

    p_a: float = dbm_to_mw(20.0)
    pj_max: float = dbm_to_mw(15.52)
    sigma2_b: float = dbm_to_mw(-74.0)
    sigma2_w: float = dbm_to_mw(-74.0)
    d_ab: float = 25.0
    d_aw: float = 25.0
    alice_first: AntennaPattern = field(default_factory=_default_pattern)
    alice_second: AntennaPattern = field(default_factory=_default_pattern)
    bob: AntennaPattern = field(default_factory=_default_pattern)
    blockage: BlockageParams = field(default_factory=BlockageParams)
    fading: FadingParams = field(default_factory=FadingParams)
    willie_in_main_lobe: bool = False
    jammer_gain_mode: str = "averaged"

    def __post_init__(self):
        for name in ("p_a", "sigma2_b", "sigma2_w", "d_ab", "d_aw"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be > 0")
        if not self.pj_max >= 0.0:
            raise DomainError("pj_max must be >= 0")
        if self.jammer_gain_mode not in JAMMER_GAIN_MODES:
            raise DomainError(f"jammer_gain_mode must be one of {JAMMER_GAIN_MODES}")

    def with_pj_max(self, pj_max: float) -> "SystemConfig":
        return replace(self, pj_max=pj_max)

    def replace(self, **changes) -> "SystemConfig":
        return replace(self, **changes)


def benchmark() -> SystemConfig:
    """The default parameter set (20 dBm data power, 25 m links, (3, 2) shapes)."""
    return SystemConfig()


def p_los(d: float, bp: BlockageParams = BlockageParams()) -> float:
    """Probability that a link of length ``d`` metres is line of sight."""
    if d < 0:
        raise DomainError(f"distance must be >= 0, got {d}")
    return math.exp(-d / bp.decay_length)


def path_loss(d: float, state: Blockage, bp: BlockageParams = BlockageParams()) -> float:
    if not d > 0:
        raise DomainError(f"distance must be > 0, got {d}")
    if Blockage(state) is Blockage.LOS:
        return bp.c_l * d ** (-bp.alpha_l)
    return bp.c_n * d ** (-bp.alpha_n)


def blockage_mixture(d: float, bp: BlockageParams, fp: FadingParams):
    """[(probability, path loss, Nakagami shape)] for the LOS and NLOS states."""
    p = p_los(d, bp)
    return [
        (p, path_loss(d, Blockage.LOS, bp), fp.nu_l),
        (1.0 - p, path_loss(d, Blockage.NLOS, bp), fp.nu_n),
    ]


def gain_pmf(p: AntennaPattern) -> GainPMF:
    """Gain distribution of a beam pointed at its target under steering error."""
    if p.steer_sigma == 0.0:
        b1 = 1.0
    else:
        b1 = erf(0.5 * p.beamwidth / (p.steer_sigma * math.sqrt(2.0)))
    return GainPMF((p.main_gain, p.side_gain), (b1, 1.0 - b1))


def eta(nu: int) -> float:
    """Alzer constant nu * (nu!)^(-1/nu)."""
    if int(nu) != nu or nu < 1:
        raise DomainError(f"eta needs an integer shape >= 1, got {nu}")
    nu = int(nu)
    # exp/log form keeps nu! from overflowing for large shapes
    return nu * math.exp(-math.lgamma(nu + 1) / nu)


def alzer_cdf(x, nu: int):
    """Alzer approximation (1 - e^(-eta x))^nu to the unit-mean gamma CDF."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("alzer_cdf requires x >= 0")
    val = (-np.expm1(-eta(nu) * x)) ** nu
    return float(val) if val.ndim == 0 else val


def alzer_coefficients(nu: int):
    """Binomial expansion of the Alzer CDF: [((-1)^l C(nu, l), l * eta)], l = 0..nu."""
    e = eta(nu)
    return [((-1) ** l * binomial(nu, l), l * e) for l in range(nu + 1)]


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for block ``index`` of master ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def sample_power_gain(nu: int, rng: np.random.Generator, size=None):
    """Draw |h|^2 ~ Gamma(shape nu, scale 1/nu) (unit mean)."""
    if np.any(np.asarray(nu) < 1):
        raise DomainError("Nakagami shape must be >= 1")
    return rng.gamma(nu, 1.0 / np.asarray(nu, dtype=float), size)
