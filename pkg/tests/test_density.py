from __future__ import annotations

import math

import numpy as np
import pytest

from cubicdist.charfn import char_fn, model_moments
from cubicdist.density import (
    NonConvergence,
    QuadParams,
    _nodes,
    _quadrature,
    _simpson_weights,
    cdf_at,
    default_z_grid,
    find_y_max,
    invert,
    mean_from_charfn,
)
from cubicdist.lfunction import CaseKind

FAST = QuadParams(prime_cutoff=5_000)


@pytest.fixture(scope="module")
def grid2():
    return invert(2.0, CaseKind.LOGDERIV, quad=FAST)


def test_simpson_weights_integrate_cubics():
    ys, h = _nodes(3.0, 0.1)
    w = _simpson_weights(ys.size - 1, h)
    assert (w @ ys**3) == pytest.approx(3.0**4 / 4, rel=1e-13)
    assert (ys.size - 1) % 2 == 0


def test_quadrature_recovers_gaussian():
    ys, h = _nodes(12.0, 0.05)
    phi = np.exp(-ys**2 / 2 + 0.3j * ys)
    z = np.linspace(-3, 3, 13)
    exact = np.exp(-((z - 0.3) ** 2) / 2) / math.sqrt(2 * math.pi)
    assert np.max(np.abs(_quadrature(z, ys, phi, h) - exact)) < 1e-10
    assert np.max(np.abs(_quadrature(z, ys, phi, h, full_complex=True) - exact)) < 1e-10


def test_mass_mean_and_refinement(grid2):
    assert grid2.total_mass() == pytest.approx(1.0, abs=1e-6)
    mean, _ = model_moments(2.0, CaseKind.LOGDERIV, 5_000)
    assert grid2.mean() == pytest.approx(mean, abs=1e-6)
    assert mean_from_charfn(2.0, CaseKind.LOGDERIV, 5_000) == pytest.approx(mean, abs=1e-7)
    assert grid2.refine_change < 1e-5
    assert np.all(np.diff(grid2.cdf_values) >= -1e-9)


def test_real_part_formula_matches_full_integral(grid2):
    ys, h = _nodes(grid2.y_max, grid2.h)
    phi = char_fn(2.0, ys, CaseKind.LOGDERIV, 5_000)
    z = grid2.z_values[::50]
    assert np.max(np.abs(_quadrature(z, ys, phi, h) - _quadrature(z, ys, phi, h, full_complex=True))) < 1e-12


def test_cdf_at_monotone_and_clamped(grid2):
    zs = np.linspace(grid2.z_values[0], grid2.z_values[-1], 200)
    vals = [cdf_at(grid2, z) for z in zs]
    assert np.all(np.diff(vals) >= -1e-9)
    with pytest.warns(RuntimeWarning):
        assert cdf_at(grid2, grid2.z_values[0] - 1) == 0.0
    with pytest.warns(RuntimeWarning):
        assert cdf_at(grid2, grid2.z_values[-1] + 1) == 1.0
    assert grid2.cdf(grid2.median()) == pytest.approx(0.5, abs=1e-6)


def test_default_grids():
    z = default_z_grid(1.0, CaseKind.LOG)
    assert z[0] == -8 and z[-1] == 8 and z.size == 1601
    mean, var = model_moments(2.0, CaseKind.LOG, 5_000)
    z2 = default_z_grid(2.0, CaseKind.LOG, 5_000)
    assert z2.size == 2001
    assert (z2[0] + z2[-1]) / 2 == pytest.approx(mean)
    assert z2[-1] - z2[0] == pytest.approx(24 * math.sqrt(var))


def test_nonconvergence_is_raised():
    with pytest.raises(NonConvergence):
        find_y_max(2.0, CaseKind.LOG, QuadParams(prime_cutoff=5_000, y_cap=60))
    with pytest.raises(NonConvergence):
        invert(2.0, CaseKind.LOGDERIV, quad=QuadParams(prime_cutoff=5_000, h_max=0.5, refine_tol=1e-300))


def test_bad_grids():
    with pytest.raises(ValueError):
        invert(2.0, CaseKind.LOG, z_grid=[0.0, -1.0], quad=FAST)
    with pytest.raises(ValueError):
        invert(0.5, CaseKind.LOG, quad=FAST)
