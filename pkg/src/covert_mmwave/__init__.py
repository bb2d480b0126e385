"""Covert dual-beam mmWave link analysis: detection, outage, capacity and design."""

from .channel import (AntennaPattern, Blockage, BlockageParams, FadingParams, GainPMF,
                      SystemConfig, alzer_cdf, benchmark, dbm_to_mw, eta, gain_pmf,
                      mw_to_dbm, p_los, path_loss)
from .design import CovertDesign, best_effective_rate, max_covert_rate, solve_pj_opt
from .errors import (ConfigError, ConsistencyError, DomainError, NoSolutionError,
                     NumericalError)
from .link import LinkMetrics, ergodic_capacity, link_metrics, outage_probability
from .warden import (DetectionResult, RealizationInputs, detection_error_star,
                     detector_curves, expected_detection_error)

__all__ = [
    "AntennaPattern", "Blockage", "BlockageParams", "FadingParams", "GainPMF",
    "SystemConfig", "alzer_cdf", "benchmark", "dbm_to_mw", "eta", "gain_pmf",
    "mw_to_dbm", "p_los", "path_loss",
    "CovertDesign", "best_effective_rate", "max_covert_rate", "solve_pj_opt",
    "ConfigError", "ConsistencyError", "DomainError", "NoSolutionError", "NumericalError",
    "LinkMetrics", "ergodic_capacity", "link_metrics", "outage_probability",
    "DetectionResult", "RealizationInputs", "detection_error_star", "detector_curves",
    "expected_detection_error",
]
