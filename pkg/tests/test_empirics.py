from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from cubicdist.density import DensityGrid
from cubicdist.eisenstein import EisensteinInt, RAMIFIED, enumerate_C, enumerate_primes
from cubicdist.empirics import (
    CountReport,
    Frequency,
    count_C,
    corollary_sets,
    decreasing_with_slack,
    divisor_probability,
    empirical_values,
    ks_distance,
    predicted_slope,
    ray_class_order_9,
    residue_zeta_k,
    restricted_count,
    symbol_frequencies,
    zeta_k_2,
)
from cubicdist.lfunction import BS_SHIFT, CaseKind, EvalParams, log_Lc, value_smoothed
from cubicdist.stats import StepCDF, ks_to_cdf, ks_two_sample


def _uniform_grid() -> DensityGrid:
    z = np.linspace(0.0, 1.0, 101)
    return DensityGrid(1.0, CaseKind.LOG, z, np.ones_like(z), z.copy())


# ---------------------------------------------------------------- KS machinery


def test_ks_to_uniform_checks_both_sides_of_jumps():
    emp = StepCDF.from_samples([0.5])
    assert ks_to_cdf(emp, _uniform_grid().cdf) == pytest.approx(0.5)
    emp = StepCDF.from_samples(np.linspace(0.005, 0.995, 100))
    assert ks_to_cdf(emp, _uniform_grid().cdf) == pytest.approx(0.005, abs=1e-12)


def test_ks_two_sample_identical_and_shifted():
    x = np.random.default_rng(0).normal(size=500)
    a = StepCDF.from_samples(x)
    assert ks_two_sample(a, StepCDF.from_samples(x)) == 0
    assert ks_two_sample(a, StepCDF.from_samples(x + 100)) == pytest.approx(1.0)


def test_stepcdf_validation():
    with pytest.raises(ValueError):
        StepCDF.from_samples([])
    with pytest.raises(ValueError):
        StepCDF.from_samples([1.0, math.nan])
    with pytest.raises(ValueError):
        StepCDF.from_samples([1.0, 2.0], weights=[1.0, -1.0])


def test_decreasing_with_slack():
    assert decreasing_with_slack([0.3, 0.1, 0.11, 0.05])
    assert not decreasing_with_slack([0.1, 0.2])


# ---------------------------------------------------------------- sample sets


def test_small_family_values_and_cache(tmp_cache):
    vals = empirical_values(200, 1.0)
    log = vals[CaseKind.LOG]
    cs = enumerate_C(200)
    assert log.norm.tolist() == sorted(log.norm.tolist())
    assert log.n_samples + log.n_excluded == len(cs)
    c0 = cs[0]
    # the batch route is the prime-sum evaluation with a shared X
    primes = value_smoothed(c0, 1.0, CaseKind.LOG, EvalParams(smoothing=5000.0), method="primes")
    assert log.value[0] == pytest.approx(primes.value, abs=1e-12)
    series = value_smoothed(c0, 1.0, CaseKind.LOG, EvalParams(smoothing=5000.0))
    assert abs(log.value[0] - series.value) < 3 * primes.err_est
    again = empirical_values(200, 1.0)
    assert len(list(tmp_cache.glob("samples_*.csv"))) == 2
    for case in CaseKind:
        assert np.array_equal(again[case].value, vals[case].value, equal_nan=True)
        assert np.array_equal(again[case].a, vals[case].a)
    s = log.samples()
    assert len(s) == len(cs) and s[0].modulus.norm == log.norm[0]


def test_sigma_above_one_uses_euler_products(tmp_cache):
    vals = empirical_values(100, 1.5, EvalParams(prime_cutoff=20_000))
    c = enumerate_C(100)[0]
    assert vals[CaseKind.LOG].value[0] == pytest.approx(log_Lc(c, 1.5, EvalParams(prime_cutoff=20_000)).value, abs=1e-10)


def test_weighted_cdf_and_shifts(tmp_cache):
    vals = empirical_values(150, 1.0)
    log = vals[CaseKind.LOG]
    e, g = corollary_sets(vals, 0.5)
    assert np.allclose(e.value, log.value - BS_SHIFT, equal_nan=True)
    assert np.allclose(g.value, vals[CaseKind.LOGDERIV].value + 0.5, equal_nan=True)
    w = log.cdf(weighted=True)
    assert w.weights.sum() == pytest.approx(1.0)
    assert ks_distance(log, _uniform_grid()) >= 0
    with pytest.raises(ValueError):
        empirical_values(50, 1.0)


# ---------------------------------------------------------------- local statistics


def test_frequency_arithmetic():
    f = Frequency(0.26, 0.25, 10_000)
    assert f.sd == pytest.approx(math.sqrt(0.25 * 0.75 / 10_000))
    assert f.z == pytest.approx(0.01 / f.sd)
    assert f.within(3.0)


def test_local_frequencies_small_y():
    ps = [p for p in enumerate_primes(10) if p.norm != 3]
    d = divisor_probability(ps[0], 20_000)
    assert d.within(5)
    fr = symbol_frequencies(ps[-1], 20_000)
    assert len(fr) == 3 and all(f.within(5) for f in fr)
    with pytest.raises(ValueError):
        divisor_probability(enumerate_primes(3)[0], 1000)


# ---------------------------------------------------------------- counting


def test_constants():
    assert ray_class_order_9() == 9
    assert residue_zeta_k() == pytest.approx(math.pi / (3 * math.sqrt(3)))
    # zeta_K(2) = zeta(2) L(2, chi_-3), L(2, chi_-3) = (psi'(1/3) - psi'(2/3)) / 9
    ref = mpmath.zeta(2) * (mpmath.psi(1, mpmath.mpf(1) / 3) - mpmath.psi(1, mpmath.mpf(2) / 3)) / 9
    assert zeta_k_2() == pytest.approx(float(ref), rel=1e-8)
    assert predicted_slope() == pytest.approx(3 * residue_zeta_k() / (4 * 9 * float(ref)), rel=1e-8)


def test_counts_small():
    assert count_C(72).count == 0
    r = count_C(200)
    assert r.count == len(enumerate_C(200))
    assert r.sane
    with pytest.raises(ValueError):
        CountReport(10, -1, 0.0, 1.0)
    with pytest.raises(ValueError):
        count_C(0)


def test_count_ratio_moderate_y():
    r = count_C(1_000_000)
    assert abs(r.ratio - 1) < 0.02
    assert abs(r.weighted_ratio - 1) < 0.02


def test_restricted_count_factor():
    # coprimality to the prime 2 (norm 4) removes a share 1/5 in the limit
    two = EisensteinInt(2, 0)
    rc = restricted_count(two, 1_000_000)
    assert rc.predicted == pytest.approx(predicted_slope() * 0.8 * 1_000_000)
    assert abs(rc.ratio - 1) < 0.03
    with pytest.raises(ValueError):
        restricted_count(RAMIFIED, 1000)
