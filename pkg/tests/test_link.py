import numpy as np
import pytest
from hypothesis import given, strategies as st

from covert_mmwave.channel import FadingParams, benchmark, dbm_to_mw
from covert_mmwave.errors import DomainError
from covert_mmwave.link import (capacity_integrand, combined_bracket, conditional_capacity,
                                effective_rate, ergodic_capacity, link_metrics,
                                outage_probability, jamming_integrals_nu2)
from covert_mmwave.specfun import e_ei

PJ_OPT = dbm_to_mw(15.52)


@pytest.mark.parametrize("rb, out, rate", [(0.1, 0.00314, 0.0997), (0.5, 0.04253, 0.4787),
                                           (1.0, 0.0935, 0.9065), (2.5, 0.121, 2.1975),
                                           (5.0, 0.1308, 4.3459)])
def test_table_rows(rb, out, rate):
    cfg = benchmark().with_pj_max(PJ_OPT)
    assert outage_probability(cfg, rb) == pytest.approx(out, rel=0.02)
    assert effective_rate(cfg, rb) == pytest.approx(rate, rel=0.02)


def test_sharp_transition_row():
    cfg = benchmark().with_pj_max(PJ_OPT)
    assert outage_probability(cfg, 10.0) == pytest.approx(0.9913, rel=0.05)
    assert effective_rate(cfg, 10.0) == pytest.approx(0.0866, rel=0.05)


def test_outage_limits_and_domain():
    cfg = benchmark()
    assert outage_probability(cfg, 1e-9) < 1e-9
    with pytest.raises(DomainError):
        outage_probability(cfg, 0.0)
    no_jam = cfg.with_pj_max(0.0)
    assert 0.0 <= outage_probability(no_jam, 3.0) <= outage_probability(cfg, 3.0)


def test_outage_vectorised():
    cfg = benchmark()
    rb = np.array([0.3, 2.0, 7.0])
    assert np.allclose(outage_probability(cfg, rb), [outage_probability(cfg, r) for r in rb],
                       rtol=1e-15, atol=0)


def test_outage_monotone():
    cfg = benchmark()
    rb = np.linspace(0.05, 14, 200)
    out = outage_probability(cfg, rb)
    assert np.all((out >= 0) & (out <= 1))
    assert np.all(np.diff(out) >= -1e-15)
    by_pj = [outage_probability(cfg.with_pj_max(p), 4.0) for p in np.logspace(-6, 6, 49)]
    assert np.all(np.diff(by_pj) >= -1e-15)
    by_pa = [outage_probability(cfg.replace(p_a=p), 4.0) for p in np.logspace(-1, 4, 41)]
    assert np.all(np.diff(by_pa) <= 1e-15)


@given(st.floats(1e-4, 1e3), st.floats(1e-3, 1e6))
def test_nu2_closed_vs_quadrature(q, kappa):
    closed = conditional_capacity(2, q, kappa, method="closed")
    quad = conditional_capacity(2, q, kappa, method="quadrature")
    assert closed == pytest.approx(quad, rel=1e-7, abs=1e-12)


def test_nu2_integrals_match_explicit_forms():
    q, kappa = 0.3, 5.0
    p = q * kappa
    j1, j2, j3 = jamming_integrals_nu2(q, kappa)
    assert j1 == pytest.approx(4.0 / (p - 2.0) * (e_ei(2.0 / kappa) - e_ei(q)), rel=1e-13)
    assert j2 == pytest.approx(2.0 * e_ei(q), rel=1e-15)
    assert j3 == pytest.approx(-2.0 * e_ei(2.0 / kappa), rel=1e-15)
    # the removable point p = 2
    j1_lim, _, _ = jamming_integrals_nu2(0.4, 5.0)
    assert j1_lim == pytest.approx(-2.0 * (0.4 * e_ei(0.4) + 1.0), rel=1e-12)


@pytest.mark.parametrize("nu", [1, 2, 3, 4])
def test_combined_integrand_finite_at_origin(nu):
    for q in (1e-3, 0.5, 30.0):
        vals = capacity_integrand(np.array([1e-8, 1e-10]), q, 100.0, nu)
        assert np.all(np.isfinite(vals))
        if nu == 1:
            assert vals == pytest.approx([q * e_ei(q)] * 2, rel=1e-5)


@given(st.floats(1e-3, 50.0))
def test_combined_bracket_continuous_across_switch(q):
    lo = combined_bracket(np.array([0.05 * (1 - 1e-12)]), q)[0]
    hi = combined_bracket(np.array([0.05 * (1 + 1e-12)]), q)[0]
    assert lo == pytest.approx(hi, rel=1e-9)
    assert combined_bracket(np.array([0.0]), q)[0] == pytest.approx(q * e_ei(q), rel=1e-14)


@pytest.mark.parametrize("nu", [1, 3])
def test_no_jamming_capacity_limit(nu):
    q = 0.02
    direct = conditional_capacity(nu, q, 0.0)
    small = conditional_capacity(nu, q, 1e-9)
    assert small == pytest.approx(direct, rel=1e-7)


def test_capacity_decreases_with_jamming():
    cfg = benchmark()
    caps = [ergodic_capacity(cfg.with_pj_max(p)) for p in np.logspace(-4, 6, 21)]
    assert np.all(np.diff(caps) < 0)
    assert caps[-1] > 0


def test_capacity_methods_agree():
    cfg = benchmark().replace(fading=FadingParams(2, 2))
    assert ergodic_capacity(cfg, "auto") == pytest.approx(ergodic_capacity(cfg, "quadrature"),
                                                           rel=1e-9)


def test_link_metrics_bundle():
    m = link_metrics(benchmark(), 2.0)
    assert m.effective_rate == pytest.approx(2.0 * (1 - m.outage))
    assert m.ergodic_capacity == pytest.approx(6.955234785994089, rel=1e-12)
