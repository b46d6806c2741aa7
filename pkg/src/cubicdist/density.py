"""Fourier inversion of the characteristic function to a density and CDF.

M(z) = (1/2pi) int exp(-izy) M~(y) dy.  Since M~(-y) is the conjugate of
M~(y), this is (1/pi) int_0^inf Re(exp(-izy) M~(y)) dy, evaluated by composite
Simpson on [0, Y_max].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .charfn import char_fn, log_abs_char_fn, model_moments
from .lfunction import CaseKind

NEG_FLOOR = 1e-6


class NonConvergence(RuntimeError):
    """The quadrature could not meet its accuracy targets."""


@dataclass(frozen=True)
class QuadParams:
    prime_cutoff: int | None = None  # default: 10^5 for sigma <= 1, 10^4 above
    threshold: float = 1e-8
    y_start: float = 50.0
    y_cap: float = 1e5
    h_max: float = 0.5
    refine_tol: float = 1e-5
    refine: bool = True
    y_max: float | None = None  # skip the doubling search

    def cutoff_for(self, sigma: float) -> int:
        if self.prime_cutoff is not None:
            return self.prime_cutoff
        return 100_000 if sigma <= 1 else 10_000


@dataclass(frozen=True)
class DensityGrid:
    sigma: float
    case: CaseKind
    z_values: np.ndarray
    m_values: np.ndarray
    cdf_values: np.ndarray
    y_max: float = 0.0
    h: float = 0.0
    refine_change: float = float("nan")
    meta: dict = field(default_factory=dict)

    def total_mass(self) -> float:
        return float(integrate.trapezoid(self.m_values, self.z_values))

    def mean(self) -> float:
        return float(integrate.trapezoid(self.z_values * self.m_values, self.z_values))

    def median(self) -> float:
        return float(np.interp(0.5, self.cdf_values, self.z_values))

    def cdf(self, z) -> np.ndarray:
        return np.interp(z, self.z_values, self.cdf_values, left=0.0, right=1.0)


def find_y_max(sigma: float, case: CaseKind, quad: QuadParams) -> float:
    """Double from quad.y_start until max |M~| over [0.9 Y, Y] drops below the threshold."""
    cutoff = quad.cutoff_for(sigma)
    y = quad.y_start
    log_thr = math.log(quad.threshold)
    while y <= quad.y_cap:
        window = np.linspace(0.9 * y, y, 65)
        if log_abs_char_fn(sigma, window, case, cutoff).max() < log_thr:
            return y
        y *= 2
    raise NonConvergence(f"|M~| still above {quad.threshold:g} at y = {quad.y_cap:g}")


def _simpson_weights(n: int, h: float) -> np.ndarray:
    w = np.ones(n + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w * h / 3


def _nodes(y_max: float, h: float) -> tuple[np.ndarray, float]:
    n = int(math.ceil(y_max / h))
    n += n % 2
    return np.linspace(0.0, y_max, n + 1), y_max / n


def _quadrature(z: np.ndarray, ys: np.ndarray, phi: np.ndarray, h: float, full_complex: bool = False) -> np.ndarray:
    w = _simpson_weights(ys.size - 1, h)
    out = np.empty(z.size)
    block = max(1, int(2_000_000 // ys.size))
    for lo in range(0, z.size, block):
        zz = z[lo : lo + block, None]
        if full_complex:
            # integrate over [-Y, Y] with the conjugate half made explicit
            kern = np.exp(-1j * zz * ys[None, :]) * phi[None, :] + np.exp(1j * zz * ys[None, :]) * np.conj(phi)[None, :]
            out[lo : lo + block] = (kern @ w).real / (2 * np.pi)
        else:
            kern = np.cos(zz * ys) * phi.real + np.sin(zz * ys) * phi.imag
            out[lo : lo + block] = (kern @ w) / np.pi
    return out


def density_values(sigma: float, case: CaseKind, z: np.ndarray, y_max: float, h: float, cutoff: int,
                   full_complex: bool = False) -> tuple[np.ndarray, float]:
    ys, h = _nodes(y_max, h)
    phi = char_fn(sigma, ys, case, cutoff)
    return _quadrature(np.asarray(z, dtype=float), ys, phi, h, full_complex), h


def default_z_grid(sigma: float, case: CaseKind, cutoff: int = 100_000) -> np.ndarray:
    """[-8, 8] step 0.01 at sigma = 1, otherwise mean +- 12 sd in 2001 points."""
    if sigma == 1:
        return np.round(np.arange(-800, 801) * 0.01, 10)
    mean, var = model_moments(sigma, CaseKind.parse(case), cutoff)
    sd = math.sqrt(var)
    return np.linspace(mean - 12 * sd, mean + 12 * sd, 2001)


def invert(sigma: float, case: CaseKind, z_grid=None, quad: QuadParams | None = None, max_expand: int = 4) -> DensityGrid:
    """Density and CDF of the limiting law on z_grid (default grid if None).

    Raises NonConvergence when the decay search hits the cap or the
    half-step Simpson check moves some density value by more than
    quad.refine_tol.  If more than 1e-3 of the mass falls outside the grid,
    the grid is widened by half its width on each side (up to max_expand
    times).
    """
    case = CaseKind.parse(case)
    quad = quad or QuadParams()
    if not sigma > 0.5:
        raise ValueError("need sigma > 1/2")
    cutoff = quad.cutoff_for(sigma)
    z = np.asarray(default_z_grid(sigma, case, cutoff) if z_grid is None else z_grid, dtype=float)
    if z.ndim != 1 or z.size < 2 or np.any(np.diff(z) <= 0):
        raise ValueError("z_grid must be increasing with at least two points")
    y_max = quad.y_max or find_y_max(sigma, case, quad)
    for attempt in range(max_expand + 1):
        width = max(abs(z[0]), abs(z[-1]), 1.0)
        h0 = min(quad.h_max, math.pi / (8 * width))
        m, h = density_values(sigma, case, z, y_max, h0, cutoff)
        mass = integrate.trapezoid(m, z)
        if z_grid is not None or abs(1 - mass) <= 1e-3 or attempt == max_expand:
            break
        step = (z[-1] - z[0]) / (z.size - 1)
        pad = int(math.ceil(0.5 * z.size))
        z = np.concatenate([z[0] - step * np.arange(pad, 0, -1), z, z[-1] + step * np.arange(1, pad + 1)])
    change = float("nan")
    if quad.refine:
        m2, _ = density_values(sigma, case, z, y_max, h / 2, cutoff)
        change = float(np.max(np.abs(m2 - m)))
        if change > quad.refine_tol:
            raise NonConvergence(f"halving the step moved the density by {change:.3g}")
    if m.min() < -NEG_FLOOR:
        warnings.warn(f"density dips to {m.min():.3g} below zero", RuntimeWarning, stacklevel=2)
    cdf = integrate.cumulative_trapezoid(m, z, initial=0.0)
    return DensityGrid(sigma, case, z, m, cdf, y_max, h, change, {"prime_cutoff": cutoff})


def cdf_at(grid: DensityGrid, z: float) -> float:
    """Linear interpolation of the CDF; outside the grid the value is clamped to 0 or 1."""
    if z < grid.z_values[0] or z > grid.z_values[-1]:
        warnings.warn(f"z = {z} outside the grid, clamping", RuntimeWarning, stacklevel=2)
    return float(np.clip(grid.cdf(z), 0.0, 1.0))


def mean_from_charfn(sigma: float, case: CaseKind, cutoff: int, dy: float = 1e-4) -> float:
    """-i M~'(0) by a central difference."""
    d = char_fn(sigma, np.array([dy, -dy]), case, cutoff)
    return float(((d[0] - d[1]) / (2 * dy) * -1j).real)
