import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SINGLE_BAND, SINGLE_X, DUAL_BAND, DUAL_X
from ctes.analysis import (
    FACTOR,
    NON_FACTOR,
    UNCOVERED,
    check_trial,
    coverage,
    factor_scan,
    locate_maxima,
    multi_scan,
    peak_width,
    sample_at,
)
from ctes.errors import DomainError
from ctes.instrument import Band, Interferogram, SetupSpec, simulate
from ctes.oracle import divisors_in
from ctes.sumcore import SumConfig, rescaled_intensity


def test_coverage_examples():
    assert tuple(coverage(SINGLE_X, SINGLE_BAND, 207911)) == (451, 461)
    assert tuple(coverage(DUAL_X, DUAL_BAND, 1308567)) == (1151, 1158)
    assert coverage(1e9, Band(400, 800), 100).empty


@settings(max_examples=200)
@given(st.integers(1, 10**7), st.integers(1, 10**6), st.integers(1, 10**4), st.integers(1, 10**4))
def test_coverage_exact_arithmetic(N, x_milli, lo_milli, width_milli):
    # integer millinanometres make the bounds exactly representable
    x, lo, hi = x_milli / 1000, lo_milli / 1000, (lo_milli + width_milli) / 1000
    cov = coverage(x, Band(lo, hi), N)
    a = -(-N * lo_milli // x_milli)
    b = N * (lo_milli + width_milli) // x_milli
    assert (cov.lo, cov.hi) == (max(a, 2), min(b, N))


def test_sample_at_grid_points_exact(single_ig):
    for k in (0, 1, 500, len(single_ig) - 2, len(single_ig) - 1):
        assert sample_at(single_ig, single_ig.lam[k]) == single_ig.intensity[k]


def test_sample_at_single_factor(single_ig):
    # the 0.01 nm grid does not hit 451 nm; peak read to ~1e-5
    assert sample_at(single_ig, 451.0) == pytest.approx(1.0, abs=2e-5)
    assert sample_at(single_ig, 461.0) == pytest.approx(1.0, abs=2e-5)


def test_sample_at_fine_grid_matches_model():
    setup = SetupSpec(SumConfig(3, 2), SINGLE_X, SINGLE_BAND, 0.001)
    ig = simulate(setup)
    assert sample_at(ig, 451.0) == pytest.approx(1.0, abs=1e-6)
    t = np.linspace(451, 461, 57)
    exact = [rescaled_intensity(SumConfig(3, 2), 207911, 207911 * v / SINGLE_X) for v in t]
    assert np.max(np.abs(sample_at(ig, t) - exact)) < 1e-6


def test_sample_at_constant():
    setup = SetupSpec(SumConfig(2, 1), 1.0, Band(400, 800), 0.5)
    lam = np.linspace(400, 800, 81)
    ig = Interferogram(setup, lam, np.full_like(lam, 0.37))
    assert sample_at(ig, 612.345) == pytest.approx(0.37, abs=1e-15)
    assert locate_maxima(ig, 10) == []


def test_sample_at_out_of_band(single_ig):
    with pytest.raises(DomainError):
        sample_at(single_ig, 449.0)


def test_check_trial_examples(single_ig):
    assert check_trial(single_ig, 207911, 461).verdict == FACTOR
    assert check_trial(single_ig, 207911, 456).verdict == NON_FACTOR
    c = check_trial(single_ig, 207911, 100)
    assert c.verdict == UNCOVERED and c.lam_target == pytest.approx(100.0)


def test_factor_scan_single(single_ig):
    rep = factor_scan(single_ig, 207911)
    assert rep.factors == [451, 461]
    assert [c.ell for c in rep.checks] == list(range(451, 462))
    d = rep.to_dict()
    assert d["coverage"] == [451, 461] and len(d["checks"]) == 11


def test_factor_scan_dual(dual_ig):
    a, b = multi_scan(dual_ig, [1308567, 1306349])
    assert a.factors == [1157]
    assert b.factors == [1153]
    assert {c.ell: c.verdict for c in a.checks}[1155] == NON_FACTOR
    assert {c.ell: c.verdict for c in b.checks}[1155] == NON_FACTOR


def test_multi_scan_neighbour(single_ig):
    assert multi_scan(single_ig, []) == []
    _, rep = multi_scan(single_ig, [207911, 207912])
    lo, hi = rep.covered
    assert rep.factors == divisors_in(207912, max(lo, 3), hi)


def test_empty_coverage_flag(single_ig):
    rep = factor_scan(single_ig, 100)
    assert rep.coverage_empty and rep.checks == [] and rep.factors == []


def test_include_two():
    setup = SetupSpec(SumConfig(3, 2), 600.0, Band(400, 800), 0.01)
    ig = simulate(setup)
    # N = 4: coverage [ceil(8/3), floor(16/3)] -> [3, 4]; N = 3: [2, 3]
    assert factor_scan(ig, 3).factors == [3]
    assert factor_scan(ig, 3, include_two=True).factors == [3]
    assert factor_scan(ig, 6, include_two=False).factors == [6]
    assert factor_scan(ig, 6, include_two=True).checks[0].ell == 4


def test_rho_monotone(single_ig):
    for N in (207911, 207909, 207913):
        before = {c.ell: c.verdict for c in factor_scan(single_ig, N, rho=0.3).checks}
        after = {c.ell: c.verdict for c in factor_scan(single_ig, N, rho=0.8).checks}
        assert all(before[k] == FACTOR for k, v in after.items() if v == FACTOR)


def test_rescaling_consistency_fine_grid():
    ig = simulate(SetupSpec(SumConfig(3, 2), SINGLE_X, SINGLE_BAND, 0.001))
    for N in (207911, 207900, 208000):
        for c in factor_scan(ig, N).checks:
            assert c.intensity == pytest.approx(rescaled_intensity(SumConfig(3, 2), N, c.ell), abs=1e-6)


def test_noiseless_completeness_random_N():
    """Every covered divisor is found and nothing else, for N in [1e3, 1e4]."""
    rng = random.Random(20261015)
    cfg = SumConfig(3, 2)
    band = Band(400, 800)
    for x in (3000.0, 12000.0):
        ig = simulate(SetupSpec(cfg, x, band, min(0.01, 400 ** 2 / (4 * x) / 32)))
        for N in rng.sample(range(1000, 10001), 150):
            rep = factor_scan(ig, N)
            lo, hi = rep.covered
            assert rep.factors == divisors_in(N, max(lo, 3), hi), N


def test_locate_maxima_two_paths():
    x, N = 5000.0, 60
    ig = simulate(SetupSpec(SumConfig(2, 1), x, Band(400, 800), 0.01))
    maxima = locate_maxima(ig, N)
    # cos^2(pi x / lam) peaks at lam = x/k, i.e. xi_N = N/k for k = 7..12
    assert len(maxima) == 6
    for xi, value in maxima:
        assert N / xi == pytest.approx(round(N / xi), abs=1e-4)
        assert value == pytest.approx(1.0, abs=1e-6)


def test_locate_maxima_single(single_ig):
    xs = [xi for xi, v in locate_maxima(single_ig, 207911) if v > 0.99]
    assert any(abs(xi - 451) < 1e-3 for xi in xs)
    assert any(abs(xi - 461) < 1e-3 for xi in xs)


def test_peak_width_two_paths():
    # cos^2 half-maximum lies a quarter period either side of the peak
    x, N = 5000.0, 60
    ig = simulate(SetupSpec(SumConfig(2, 1), x, Band(400, 800), 0.001))
    ell = 6  # lam = 500 nm, u = 10
    expected = N / x * (x / 9.75 - x / 10.25)
    assert peak_width(ig, N, ell) == pytest.approx(expected, rel=1e-4)
