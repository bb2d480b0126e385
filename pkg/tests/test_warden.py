import numpy as np
import pytest
from hypothesis import given, strategies as st

from covert_mmwave.channel import benchmark, dbm_to_mw
from covert_mmwave.errors import DomainError
from covert_mmwave.warden import (RealizationInputs, conditional_detection_error,
                                  detection_error_star, detection_error_star_array,
                                  detector_curves, expected_detection_error)

SIGMA2 = dbm_to_mw(-74.0)


def test_optimal_error_branches():
    assert detection_error_star(RealizationInputs(2.0, 1.0, SIGMA2)).p_e_star == 0.0
    assert detection_error_star(RealizationInputs(1.0, 4.0, SIGMA2)).p_e_star == pytest.approx(0.75)
    assert detection_error_star(RealizationInputs(3.0, 3.0, SIGMA2)).p_e_star == 0.0
    with pytest.raises(DomainError):
        detection_error_star(RealizationInputs(1.0, 0.0, SIGMA2))


def test_detector_curve_boundaries():
    r = RealizationInputs(1.0, 4.0, 0.5)
    assert detector_curves(r, 0.4) == (1.0, 0.0, 1.0)
    assert detector_curves(r, r.lambda3) == (0.0, 1.0, 1.0)
    _, _, p_e = detector_curves(r, 0.5 * (r.lambda1 + r.lambda2))
    assert p_e == pytest.approx(0.75, abs=1e-15)


powers = st.floats(1e-3, 1e3)


@given(powers, powers, st.floats(1e-3, 10))
def test_grid_minimum_equals_optimum(s_f, s_j, sigma2):
    r = RealizationInputs(s_f, s_j, sigma2)
    best = detection_error_star(r)
    tau = np.concatenate([np.linspace(0.0, 1.2 * r.lambda3, 4001),
                          [0.5 * (best.tau_lo + best.tau_hi)]])
    p_fa, p_md, p_e = detector_curves(r, tau)
    assert np.all(np.diff(p_fa[:-1]) <= 0) and np.all(np.diff(p_md[:-1]) >= 0)
    i = int(np.argmin(p_e))
    assert p_e[i] == pytest.approx(best.p_e_star, abs=1e-12)
    inside = (tau >= best.tau_lo) & (tau <= best.tau_hi)
    assert np.min(p_e[inside]) == pytest.approx(best.p_e_star, abs=1e-12)


@given(powers, powers)
def test_optimum_in_unit_interval_and_zero_iff_covered(s_f, s_j):
    p = detection_error_star(RealizationInputs(s_f, s_j, SIGMA2)).p_e_star
    assert 0.0 <= p <= 1.0
    assert (p == 0.0) == (s_j <= s_f)


@given(st.lists(st.tuples(powers, powers), min_size=1, max_size=20))
def test_vectorised_matches_scalar(pairs):
    s_f, s_j = map(np.array, zip(*pairs))
    vec = detection_error_star_array(s_f, s_j)
    ref = [detection_error_star(RealizationInputs(a, b, SIGMA2)).p_e_star for a, b in pairs]
    assert np.allclose(vec, ref, atol=0, rtol=1e-15)


def test_no_jamming_curves_are_steps():
    r = RealizationInputs(1.0, 0.0, 0.5)
    assert detector_curves(r, 0.2)[2] == 1.0
    assert detector_curves(r, 1.0)[2] == 0.0
    assert detector_curves(r, 2.0)[2] == 1.0


def test_benchmark_expected_error():
    assert expected_detection_error(benchmark()) == pytest.approx(0.95, abs=0.002)
    assert expected_detection_error(benchmark().with_pj_max(dbm_to_mw(60))) >= 0.999


def test_small_jamming_limit():
    assert expected_detection_error(benchmark().with_pj_max(1e-13)) == 0.0
    assert expected_detection_error(benchmark().with_pj_max(1e-9)) < 1e-6
    with pytest.raises(DomainError):
        expected_detection_error(benchmark().with_pj_max(0.0))


def test_monotone_in_jamming_and_data_power():
    cfg = benchmark()
    pj = np.logspace(-8, 8, 81)
    vals = [expected_detection_error(cfg.with_pj_max(p)) for p in pj]
    assert np.all(np.diff(vals) >= -1e-15)
    assert vals[-1] > 0.99999
    pa = np.logspace(-2, 4, 31)
    vals = [expected_detection_error(cfg.replace(p_a=p)) for p in pa]
    assert np.all(np.diff(vals) <= 1e-15)


@pytest.mark.parametrize("nu", [1, 2, 3, 5])
def test_conditional_error_limits(nu):
    assert conditional_detection_error(nu, 0.0) == 0.0
    assert conditional_detection_error(nu, 1e-8) < 1e-6
    assert conditional_detection_error(nu, 1e8) > 0.999
    c = np.logspace(-4, 6, 60)
    v = [conditional_detection_error(nu, x) for x in c]
    assert np.all(np.diff(v) >= -1e-14)


def test_variants_order():
    base = benchmark()
    det_main = base.replace(jammer_gain_mode="deterministic_main")
    in_lobe = base.replace(willie_in_main_lobe=True)
    assert expected_detection_error(det_main) >= expected_detection_error(base)
    assert expected_detection_error(in_lobe) < expected_detection_error(base)
