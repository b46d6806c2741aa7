from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicdist.charfn import (
    AtomSpec,
    atom,
    atoms_array,
    char_fn,
    coeff_G,
    coeff_H,
    decay_check,
    dirichlet_M,
    lambda_y,
    local_factor,
    local_law,
    log_abs_char_fn,
    model_moments,
    ramified_series,
    ramified_shift,
    tail_estimate,
    _local_options,
)
from cubicdist.eisenstein import RAMIFIED_PRIME, enumerate_primes
from cubicdist.lfunction import CaseKind

PRIMES = [p for p in enumerate_primes(200) if p.norm != 3]
CASES = list(CaseKind)
small_u = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


# ---------------------------------------------------------------- G and H


def test_coefficients_small_cases():
    u = 0.7 - 0.2j
    assert coeff_G(0, u) == 1
    assert coeff_G(1, u) == pytest.approx(u)
    assert coeff_G(2, u) == pytest.approx(u + u * u / 2)
    assert coeff_G(3, u) == pytest.approx(u + u * u + u**3 / 6)
    assert coeff_H(0, u) == 1
    assert coeff_H(1, u) == pytest.approx(u)
    assert coeff_H(2, u) == pytest.approx(u * (u + 1) / 2)
    assert coeff_H(3, u) == pytest.approx(u * (u + 1) * (u + 2) / 6)
    with pytest.raises(ValueError):
        coeff_G(-1, u)
    with pytest.raises(ValueError):
        coeff_H(-1, u)


@settings(max_examples=40, deadline=None)
@given(small_u, st.floats(0.0, 2 * math.pi))
def test_generating_functions(u, theta):
    # sum H_r t^r = (1 - t)^-u, sum G_r t^r = exp(u t / (1 - t)) at |t| = 0.1
    t = 0.1 * cmath.exp(1j * theta)
    h = sum(coeff_H(r, u) * t**r for r in range(60))
    g = sum(coeff_G(r, u) * t**r for r in range(60))
    assert abs(h - cmath.exp(-u * cmath.log(1 - t))) < 1e-12 * max(1, abs(h))
    assert abs(g - cmath.exp(u * t / (1 - t))) < 1e-12 * max(1, abs(g))


@settings(max_examples=30, deadline=None)
@given(st.floats(-5, 5), st.integers(0, 8))
def test_lambda_at_zero_and_conjugation(y, r):
    p = PRIMES[3]
    for case in CASES:
        assert lambda_y(p, r, 0.0, case) == (1 if r == 0 else 0)
        assert lambda_y(p, r, -y, case) == pytest.approx(lambda_y(p, r, y, case).conjugate(), abs=1e-12)


def test_lambda_g_uses_the_norm():
    p = PRIMES[0]
    assert lambda_y(p, 1, 2.0, CaseKind.LOGDERIV) == pytest.approx(-2j * math.log(p.norm))
    assert lambda_y(p, 1, 2.0, CaseKind.LOG) == pytest.approx(2j)


# ---------------------------------------------------------------- atoms and local laws


def test_atom_matches_array():
    norms = np.array([p.norm for p in PRIMES], dtype=float)
    for case in CASES:
        for s in (0.75, 1.0, 2.0):
            arr = atoms_array(norms, s, case)
            for i, p in enumerate(PRIMES):
                for j in range(3):
                    assert arr[i, j] == pytest.approx(atom(p, AtomSpec(s, case, j)), rel=1e-13, abs=1e-15)


def test_atom_values():
    p = PRIMES[0]
    n = p.norm
    assert atom(p, AtomSpec(1.0, CaseKind.LOG, 0)) == pytest.approx(2 * math.log(1 - 1 / n))
    assert atom(p, AtomSpec(1.0, CaseKind.LOGDERIV, 0)) == pytest.approx(2 * math.log(n) / (n - 1))
    # j = 1 and j = 2 are conjugate, so their real parts agree for real s
    assert atom(p, AtomSpec(1.3, CaseKind.LOG, 1)) == pytest.approx(atom(p, AtomSpec(1.3, CaseKind.LOG, 2)))


def test_atom_spec_validation():
    with pytest.raises(ValueError):
        AtomSpec(1.0, CaseKind.LOG, 3)
    with pytest.raises(ValueError):
        AtomSpec(0.5, CaseKind.LOG, 0)
    with pytest.raises(ValueError):
        atom(RAMIFIED_PRIME, AtomSpec(1.0, CaseKind.LOG, 1))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES), st.floats(0.55, 3.0), st.floats(-30, 30), st.sampled_from(CASES))
def test_local_factor_matches_law(p, sigma, y, case):
    law = local_law(p, sigma, case)
    assert abs(local_factor(p, sigma, y, case) - law.characteristic(y)) < 1e-14


@pytest.mark.parametrize("case", CASES)
def test_local_law_masses_and_ramified(case):
    p = PRIMES[1]
    law = local_law(p, 1.0, case)
    n = p.norm
    assert law.atoms[0] == (0.0, 1 / (n + 1))
    assert sum(m for _, m in law.atoms) == pytest.approx(1, abs=1e-15)
    ram = local_law(RAMIFIED_PRIME, 1.0, case)
    assert ram.atoms == ((ramified_shift(1.0, case), 1.0),)
    assert local_factor(RAMIFIED_PRIME, 1.0, 2.5, case) == pytest.approx(cmath.exp(2.5j * ramified_shift(1.0, case)))


@settings(max_examples=25, deadline=None)
@given(st.floats(-10, 10), st.sampled_from(CASES))
def test_convolution_is_product_of_characteristic_functions(y, case):
    a, b = local_law(PRIMES[0], 1.0, case), local_law(PRIMES[5], 1.0, case)
    conv = sum(m * cmath.exp(1j * y * x) for x, m in a.convolve(b))
    assert abs(conv - a.characteristic(y) * b.characteristic(y)) < 1e-14


def test_local_dirichlet_terms_match_local_factor():
    # 1 + sum over exponent patterns of one prime reproduces its local factor
    ys = np.array([0.3, 1.0, 4.0])
    for case in CASES:
        for p in PRIMES[:4]:
            opts = _local_options(p.norm, 1.0, ys, case, 1e40)
            series = 1 + sum(v for _, v in opts)
            direct = np.array([local_factor(p, 1.0, y, case) for y in ys])
            assert np.max(np.abs(series - direct)) < 1e-13


def test_ramified_series_is_ramified_factor():
    ys = np.array([-3.0, 0.0, 0.5, 2.0])
    for case in CASES:
        expected = np.array([local_factor(RAMIFIED_PRIME, 1.5, y, case) for y in ys])
        assert np.max(np.abs(ramified_series(1.5, ys, case) - expected)) < 1e-13


# ---------------------------------------------------------------- the product


@pytest.mark.parametrize("case", CASES)
def test_char_fn_basic_symmetries(case):
    ys = np.linspace(0.1, 20, 50)
    assert char_fn(1.0, 0.0, case, 10_000) == pytest.approx(1.0, abs=1e-12)  # rounding over ~1200 factors
    pos = char_fn(1.0, ys, case, 10_000)
    neg = char_fn(1.0, -ys, case, 10_000)
    assert np.max(np.abs(neg - np.conj(pos))) < 1e-14
    assert np.all(np.abs(pos) <= 1 + 1e-14)
    assert np.allclose(log_abs_char_fn(1.0, ys, case, 10_000), np.log(np.abs(pos)), atol=1e-10)


def test_char_fn_argument_checks():
    with pytest.raises(ValueError):
        char_fn(0.5, 1.0, CaseKind.LOG)
    with pytest.raises(ValueError):
        char_fn(1.0, 1.0, CaseKind.LOG, prime_cutoff=3)
    with pytest.raises(ValueError):
        char_fn(1.0, 1.0, "bogus")


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("sigma", [0.75, 1.0, 2.0])
def test_cutoff_change_within_tail_estimate(case, sigma):
    ys = np.array([0.5, 1.0, 3.0])
    lo = char_fn(sigma, ys, case, 20_000)
    hi = char_fn(sigma, ys, case, 200_000)
    assert np.all(np.abs(hi - lo) <= tail_estimate(sigma, ys, case, 20_000, lo))


def test_tail_estimate_shrinks():
    a = tail_estimate(1.0, 2.0, CaseKind.LOG, 10_000)
    b = tail_estimate(1.0, 2.0, CaseKind.LOG, 100_000)
    assert b < a


@pytest.mark.parametrize("case", CASES)
def test_moments_match_derivatives(case):
    mean, var = model_moments(1.5, case, 10_000)
    d = 1e-4
    v = char_fn(1.5, np.array([-d, 0.0, d]), case, 10_000)
    assert (-1j * (v[2] - v[0]) / (2 * d)).real == pytest.approx(mean, abs=1e-7)
    second = -(v[2] - 2 * v[1] + v[0]).real / d**2
    assert second - mean**2 == pytest.approx(var, rel=1e-4)


# ---------------------------------------------------------------- Dirichlet series


@pytest.mark.parametrize("case", CASES)
def test_dirichlet_trivial_cases(case):
    assert dirichlet_M(1.5, 0.0, case, 10_000) == pytest.approx(1.0, abs=1e-14)
    # term_cutoff 1 leaves the ramified factor alone
    assert dirichlet_M(1.5, 2.0, case, 1) == pytest.approx(local_factor(RAMIFIED_PRIME, 1.5, 2.0, case), abs=1e-13)
    with pytest.raises(ValueError):
        dirichlet_M(1.5, 1.0, case, 0)


def test_dirichlet_approaches_product_for_large_sigma():
    for case in CASES:
        d = dirichlet_M(2.0, 1.0, case, 100_000)
        e = char_fn(2.0, 1.0, case, 1_000_000)
        assert abs(d - e) < 1e-4


# ---------------------------------------------------------------- decay


def test_decay_report_shape_and_fit():
    ys = np.arange(20.0, 200.0, 0.5)
    rep = decay_check(1.0, CaseKind.LOG, ys, prime_cutoff=20_000, window=40)
    assert rep.kappa > 0 and rep.C > 0
    assert rep.abs_values.shape == ys.shape
    assert rep.decreasing
    with pytest.raises(ValueError):
        decay_check(1.0, CaseKind.LOG, np.array([1.0, 0.5, 2.0]))
