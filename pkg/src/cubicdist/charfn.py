"""The limiting characteristic function M~_s(y) of the L_c-type values.

Two independent forms:

* Euler product: each unramified prime p contributes the characteristic
  function of a four-atom law (mass 1/(N+1) at 0, mass N/(3(N+1)) at each of
  -a_{p,j}).  The ramified prime contributes a point mass at -a_{p,0}.
* Dirichlet series: a triple sum over coprime ideals a, b and any m, all
  prime to 3, of lambda_y(a^3 m) lambda_y(b^3 m) / N(a^3 b^3 m^2)^sigma,
  times the weight prod_{p | abm} (1 + 1/N(p))^-1.  lambda_y is
  multiplicative, with lambda_y(p^r) = H_r(iy) in the log case and
  G_r(-iy log N(p)) in the log-derivative case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .eisenstein import RAMIFIED_PRIME, PrimeIdealRec, Splitting, enumerate_primes, prime_ideal_norms
from .lfunction import CaseKind

_W = np.exp(2j * np.pi * np.arange(3) / 3)


# ---------------------------------------------------------------- coefficients


def coeff_G(r: int, u: complex) -> complex:
    """G_r(u) = sum_{n=1}^r binom(r-1, n-1) u^n / n!, G_0 = 1."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return 1.0 + 0j
    return complex(sum(math.comb(r - 1, n - 1) * u**n / math.factorial(n) for n in range(1, r + 1)))


def coeff_H(r: int, u: complex) -> complex:
    """H_r(u) = u (u+1) ... (u+r-1) / r!, H_0 = 1."""
    if r < 0:
        raise ValueError("r must be >= 0")
    out = 1.0 + 0j
    for k in range(r):
        out *= (u + k) / (k + 1)
    return out


def _coeff_array(r: int, u: np.ndarray, case: CaseKind) -> np.ndarray:
    f = coeff_H if case is CaseKind.LOG else coeff_G
    return np.array([f(r, uu) for uu in np.ravel(u)], dtype=complex).reshape(np.shape(u))


def lambda_y(prime: PrimeIdealRec, power: int, y: float, case: CaseKind) -> complex:
    """lambda_y(p^power): H_power(iy) (log case) or G_power(-iy log N(p)) (log-derivative case)."""
    case = CaseKind.parse(case)
    if case is CaseKind.LOG:
        return coeff_H(power, 1j * y)
    return coeff_G(power, -1j * y * math.log(prime.norm))


# ---------------------------------------------------------------- atoms


@dataclass(frozen=True)
class AtomSpec:
    s: complex
    case: CaseKind
    j: int

    def __post_init__(self) -> None:
        if self.j not in (0, 1, 2):
            raise ValueError("j must be 0, 1 or 2")
        if not complex(self.s).real > 0.5:
            raise ValueError("need Re(s) > 1/2")


def atoms_array(norms: np.ndarray, s: complex, case: CaseKind) -> np.ndarray:
    """a_{p,j}(s) for each norm (rows) and j = 0, 1, 2 (columns)."""
    n = np.asarray(norms, dtype=float)[:, None]
    ns = n ** complex(s) if isinstance(s, complex) and s.imag else n ** float(np.real(s))
    if case is CaseKind.LOG:
        return 2 * np.log(np.abs(1 - _W[None, :] / ns))
    return 2 * np.real(_W[None, :] * np.log(n) / (ns - _W[None, :]))


def atom(prime: PrimeIdealRec, spec: AtomSpec) -> float:
    """log case: 2 Re log(1 - w^j N^-s); log-derivative case: 2 Re(w^j log N / (N^s - w^j))."""
    if prime.splitting is Splitting.RAMIFIED and spec.j != 0:
        raise ValueError("the ramified prime only has the j = 0 atom")
    s = complex(spec.s)
    z = _W[spec.j]
    n = float(prime.norm)
    if CaseKind.parse(spec.case) is CaseKind.LOG:
        return 2 * math.log(abs(1 - z * n ** (-s)))
    return 2 * (z * math.log(n) / (n**s - z)).real


# ---------------------------------------------------------------- local laws


@dataclass(frozen=True)
class LocalLaw:
    prime: PrimeIdealRec
    atoms: tuple[tuple[float, float], ...]  # (location, mass)

    def __post_init__(self) -> None:
        total = sum(m for _, m in self.atoms)
        if abs(total - 1) > 1e-12:
            raise ValueError(f"masses sum to {total}")

    def characteristic(self, y: float | np.ndarray) -> complex | np.ndarray:
        y = np.asarray(y, dtype=float)
        out = sum(m * np.exp(1j * y * loc) for loc, m in self.atoms)
        return complex(out) if out.ndim == 0 else out

    def mean(self) -> float:
        return sum(m * loc for loc, m in self.atoms)

    def convolve(self, other: LocalLaw) -> list[tuple[float, float]]:
        return [(x + u, m * n) for x, m in self.atoms for u, n in other.atoms]


def local_law(prime: PrimeIdealRec, s: complex, case: CaseKind) -> LocalLaw:
    case = CaseKind.parse(case)
    if prime.splitting is Splitting.RAMIFIED:
        return LocalLaw(prime, ((-atom(prime, AtomSpec(s, case, 0)), 1.0),))
    n = prime.norm
    q = n / (3 * (n + 1))
    atoms = [(0.0, 1 / (n + 1))] + [(-atom(prime, AtomSpec(s, case, j)), q) for j in range(3)]
    return LocalLaw(prime, tuple(atoms))


def ramified_shift(s: complex, case: CaseKind) -> float:
    """Location -a_{<1-w>,0} of the ramified point mass."""
    return -atom(RAMIFIED_PRIME, AtomSpec(s, CaseKind.parse(case), 0))


def local_factor(prime: PrimeIdealRec, s: complex, y: float, case: CaseKind) -> complex:
    """Characteristic function of the local law at y, from the closed form."""
    case = CaseKind.parse(case)
    if prime.splitting is Splitting.RAMIFIED:
        s = complex(s)
        if case is CaseKind.LOG:
            return complex(np.exp(-2j * y * math.log(abs(1 - 3 ** (-s)))))
        return complex(np.exp(-2j * y * (math.log(3) / (3**s - 1)).real))
    n = prime.norm
    a = atoms_array(np.array([n]), s, case)[0]
    return 1 / (n + 1) + n / (3 * (n + 1)) * complex(np.exp(-1j * y * a).sum())


# ---------------------------------------------------------------- products


@lru_cache(maxsize=16)
def _atom_table(s: complex, case: CaseKind, cutoff: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    norms = prime_ideal_norms(cutoff).astype(float)
    a = atoms_array(norms, s, case)
    return norms, a, norms / (3 * (norms + 1))


def _factors(y: np.ndarray, s: complex, case: CaseKind, cutoff: int) -> np.ndarray:
    norms, a, q = _atom_table(s, case, cutoff)
    p0 = 1 / (norms + 1)
    real_s = np.isreal(s)
    ph = np.exp(-1j * y[:, None, None] * (a[None, :, :2] if real_s else a[None, :, :]))
    if real_s:
        inner = ph[:, :, 0] + 2 * ph[:, :, 1]
    else:
        inner = ph.sum(axis=2)
    return p0[None, :] + q[None, :] * inner


def _chunks(y: np.ndarray, cutoff: int):
    n = max(1, int(4_000_000 // max(1, prime_ideal_norms(cutoff).size)))
    for lo in range(0, y.size, n):
        yield lo, y[lo : lo + n]


def char_fn(s: complex, y: float | np.ndarray, case: CaseKind, prime_cutoff: int = 100_000):
    """Truncated Euler product for M~_s(y): ramified prefactor times local factors with N(p) <= cutoff."""
    case = CaseKind.parse(case)
    if prime_cutoff < 7:
        raise ValueError("prime_cutoff must be >= 7")
    s = _norm_s(s)
    yy = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.empty(yy.shape, dtype=complex)
    shift = ramified_shift(s, case)
    for lo, part in _chunks(yy, prime_cutoff):
        f = _factors(part, s, case, prime_cutoff)
        out[lo : lo + part.size] = np.exp(1j * part * shift) * np.prod(f, axis=1)
    return complex(out[0]) if np.ndim(y) == 0 else out


def log_abs_char_fn(s: complex, y: np.ndarray, case: CaseKind, prime_cutoff: int = 100_000) -> np.ndarray:
    """log |M~_s(y)| as a sum of logs, safe against underflow."""
    case = CaseKind.parse(case)
    s = _norm_s(s)
    yy = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.empty(yy.shape)
    for lo, part in _chunks(yy, prime_cutoff):
        f = _factors(part, s, case, prime_cutoff)
        with np.errstate(divide="ignore"):
            out[lo : lo + part.size] = np.log(np.abs(f)).sum(axis=1)
    return out


def _norm_s(s: complex) -> complex | float:
    s = complex(s)
    if not s.real > 0.5:
        raise ValueError("need Re(s) > 1/2")
    return s.real if s.imag == 0 else s


def tail_estimate(s: complex, y: float | np.ndarray, case: CaseKind, prime_cutoff: int, value=None):
    """Bound for |M~(y) - truncated product| from the primes beyond the cutoff.

    Per prime |1 - phi_p(y)| <= |y| |E X_p| + y^2 E X_p^2 / 2, with
    |E X_p| <= 3 L^k N^-3sigma and E X_p^2 <= 3 L^2k N^-2sigma (L = log N,
    k = 0 or 1 by case), summed against 2.6 / log x prime ideals per unit
    norm.  The product over the tail then deviates from 1 by at most
    exp(total) - 1.
    """
    case = CaseKind.parse(case)
    sig = complex(s).real
    k = 0 if case is CaseKind.LOG else 1
    m1 = _log_power_tail(prime_cutoff, 3 * sig, k - 1)
    m2 = _log_power_tail(prime_cutoff, 2 * sig, 2 * k - 1)
    yy = np.abs(np.asarray(y, dtype=float))
    total = yy * m1 + yy * yy * m2 / 2
    if value is None:
        value = char_fn(s, y, case, prime_cutoff)
    rounding = 4e-16 * prime_ideal_norms(prime_cutoff).size
    return np.abs(value) * np.expm1(total) + rounding


def _log_power_tail(x0: float, a: float, m: int) -> float:
    """3 * 2.6 * int_{x0}^inf x^-a (log x)^m dx, via x = e^u."""
    lo = math.log(x0)
    f = lambda u: math.exp((1 - a) * (u - lo)) * (u / lo) ** m
    val = integrate.quad(f, lo, np.inf, limit=200)[0]
    return 3 * 2.6 * val * x0 ** (1 - a) * lo**m


def model_moments(s: float, case: CaseKind, prime_cutoff: int = 100_000) -> tuple[float, float]:
    """Mean and variance of the truncated random model (exact, from the atoms)."""
    case = CaseKind.parse(case)
    norms, a, q = _atom_table(_norm_s(s), case, prime_cutoff)
    x = -a
    m1 = (q[:, None] * x).sum(axis=1)
    m2 = (q[:, None] * x * x).sum(axis=1)
    mean = ramified_shift(s, case) + m1.sum()
    return float(mean), float((m2 - m1 * m1).sum())


# ---------------------------------------------------------------- Dirichlet series


def _local_options(norm: int, sigma: float, ys: np.ndarray, case: CaseKind, budget: float):
    """(N^e, weighted term array) for each exponent pattern of one prime with N^e <= budget.

    The patterns are a = p^alpha, b = p^beta, m = p^mu with min(alpha, beta) = 0
    and e = 3 alpha + 3 beta + 2 mu >= 1.
    """
    w = 1 / (1 + 1 / norm)
    if case is CaseKind.LOG:
        us = 1j * ys
    else:
        us = -1j * ys * math.log(norm)
    cache: dict[int, np.ndarray] = {}

    def lam(r: int) -> np.ndarray:
        if r not in cache:
            cache[r] = _coeff_array(r, us, case)
        return cache[r]

    opts = []
    emax = int(math.floor(math.log(budget) / math.log(norm) + 1e-12))
    for e in range(2, emax + 1):
        total = np.zeros(ys.shape, dtype=complex)
        for alpha in range(0, e // 3 + 1):
            for beta in range(0, e // 3 + 1):
                if min(alpha, beta) or (e - 3 * alpha - 3 * beta) % 2 or 3 * alpha + 3 * beta > e:
                    continue
                mu = (e - 3 * alpha - 3 * beta) // 2
                total = total + lam(3 * alpha + mu) * lam(3 * beta + mu)
        if np.any(total != 0):
            opts.append((float(norm) ** e, w * total * float(norm) ** (-e * sigma)))
    return opts


def ramified_series(sigma: float, y: np.ndarray, case: CaseKind, tol: float = 1e-18) -> np.ndarray:
    """sum_{r1, r2} lambda(<1-w>^r1) lambda(<1-w>^r2) 3^{-(r1+r2) sigma}, summed until the terms vanish."""
    ys = np.asarray(y, dtype=float)
    us = 1j * ys if case is CaseKind.LOG else -1j * ys * math.log(3)
    total = np.zeros(ys.shape, dtype=complex)
    r, small = 0, 0
    while small < 5 and r < 5000:
        term = _coeff_array(r, us, case) * 3.0 ** (-r * sigma)
        total += term
        small = small + 1 if np.max(np.abs(term)) < tol else 0
        r += 1
    return total * total


def dirichlet_M(sigma: float, y: float | np.ndarray, case: CaseKind, term_cutoff: int):
    """M~_sigma(y) from the Dirichlet series, truncated to N(a^3 b^3 m^2) <= term_cutoff.

    The configurations are generated prime by prime (ascending norm, primes of
    norm <= term_cutoff^(1/2)), so coprimality of a and b and the weights hold
    by construction.  The ramified double sum is summed to convergence.
    """
    case = CaseKind.parse(case)
    if term_cutoff < 1:
        raise ValueError("term_cutoff must be >= 1")
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    primes = [] if term_cutoff < 4 else [p for p in enumerate_primes(max(3, math.isqrt(term_cutoff))) if p.norm != 3]
    options = [_local_options(p.norm, sigma, ys, case, term_cutoff) for p in primes]
    norms = [p.norm for p in primes]

    def rec(i: int, budget: float) -> np.ndarray:
        acc = np.ones(ys.shape, dtype=complex)
        for k in range(i, len(norms)):
            if norms[k] * norms[k] > budget:
                break
            for size, val in options[k]:
                if size > budget:
                    break
                acc = acc + val * rec(k + 1, budget / size)
        return acc

    out = ramified_series(sigma, ys, case) * rec(0, float(term_cutoff))
    return complex(out[0]) if np.ndim(y) == 0 else out


# ---------------------------------------------------------------- decay


@dataclass(frozen=True)
class DecayReport:
    y: np.ndarray
    abs_values: np.ndarray
    log_abs: np.ndarray
    kappa: float
    log_c: float
    window_maxima: np.ndarray
    decreasing: bool

    @property
    def C(self) -> float:
        return math.exp(self.log_c)


def decay_check(
    sigma: float,
    case: CaseKind,
    y_grid: np.ndarray,
    prime_cutoff: int = 100_000,
    window: float = 50.0,
    tail_from: float | None = None,
) -> DecayReport:
    """Fit |M~(y)| ~ exp(-C y^kappa) and test that the decay sets in.

    "Eventually decreasing" means the maxima of log|M~| over consecutive
    windows of the given width, from tail_from (default: grid midpoint) on,
    strictly decrease.  Pointwise monotonicity is too strong: the product
    oscillates on scales much shorter than the decay.
    """
    ys = np.asarray(y_grid, dtype=float)
    if ys.size < 3 or np.any(np.diff(ys) <= 0) or ys[0] <= 0:
        raise ValueError("y_grid must be positive and increasing")
    la = log_abs_char_fn(sigma, ys, case, prime_cutoff)
    good = np.isfinite(la) & (la < 0)
    kappa, log_c = np.polyfit(np.log(ys[good]), np.log(-la[good]), 1)
    start = ys[ys.size // 2] if tail_from is None else tail_from
    edges = np.arange(start, ys[-1] + 1e-9, window)
    maxima = np.array([la[(ys >= lo) & (ys < lo + window)].max() for lo in edges if np.any((ys >= lo) & (ys < lo + window))])
    return DecayReport(ys, np.exp(la), la, float(kappa), float(log_c), maxima, bool(np.all(np.diff(maxima) < 0)))
