"""Numerical values of log L_c(sigma) and L_c'/L_c(sigma).

L_c(s) = L(s, chi_c) L(s, conj chi_c).  For sigma > 1 the truncated Euler
product converges absolutely.  For 1/2 < sigma <= 1 there is no convergent
product, and values come from sums damped by exp(-N/X).  Their accuracy is
only checked empirically, by comparing X with 2X.

Every per-prime quantity here is a function of the symbol exponent j in
{-1, 0, 1, 2}, where -1 means chi_c(p) = 0.  The evaluators therefore build a
(primes x 4) weight table and gather from it.  The same code then serves one
modulus or a block of thousands.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .cubic_symbol import chi_at_primes, exponents_mod_element
from .eisenstein import EisensteinInt, ModulusC, PrimeTable, lattice_points, prime_table

LOG3 = math.log(3.0)
ZERO_THRESHOLD = 1e-10
BS_SHIFT = math.log(4 * math.sqrt(3) * math.pi**2)  # log L_c(1) - E(c)


class CaseKind(str, enum.Enum):
    LOG = "log"
    LOGDERIV = "logderiv"

    @classmethod
    def parse(cls, text: str | CaseKind) -> CaseKind:
        if isinstance(text, CaseKind):
            return text
        t = str(text).lower()
        aliases = {"1": "log", "case1": "log", "2": "logderiv", "case2": "logderiv"}
        return cls(aliases.get(t, t))


class ExcludedValue(ArithmeticError):
    """L_c(sigma) vanishes numerically, so the modulus leaves the starred sum."""


@dataclass(frozen=True)
class EvalParams:
    """prime_cutoff bounds Euler products; smoothing is X; series_cutoff bounds N in smoothed sums.

    smoothing=None means the default 10^3 N(c) (0.5/(sigma-1/2))^2, and
    series_cutoff=None means 25 times the largest X in use.
    """

    prime_cutoff: int = 100_000
    smoothing: float | None = None
    series_cutoff: int | None = None

    def __post_init__(self) -> None:
        if self.prime_cutoff < 7:
            raise ValueError("prime_cutoff must be >= 7")
        if self.smoothing is not None and self.smoothing < 1:
            raise ValueError("smoothing must be >= 1")
        if self.series_cutoff is not None and self.series_cutoff < self.prime_cutoff:
            raise ValueError("series_cutoff must be >= prime_cutoff")

    def smoothing_for(self, c_norm: int, sigma: float) -> float:
        if self.smoothing is not None:
            return float(self.smoothing)
        return 1e3 * c_norm * (0.5 / (sigma - 0.5)) ** 2

    def cutoff_for(self, x: float) -> int:
        if self.series_cutoff is not None:
            return int(self.series_cutoff)
        return max(self.prime_cutoff, int(math.ceil(25 * x)))


@dataclass(frozen=True)
class LValue:
    value: float
    err_est: float

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------- weight tables

_W = np.exp(2j * np.pi * np.arange(3) / 3)


def _check_sigma_gt1(sigma: float) -> None:
    if not sigma > 1:
        raise ValueError("the Euler product needs sigma > 1")


def euler_weights(norms: np.ndarray, sigma: float, case: CaseKind) -> np.ndarray:
    """Per-prime contribution to L_c-type values given chi(p) = w^j, column j+1."""
    n = norms.astype(float)
    t = n ** (-sigma)
    out = np.zeros((n.size, 4))
    if case is CaseKind.LOG:
        # -2 log|1 - w^j t|
        out[:, 1] = -2 * np.log1p(-t)
        out[:, 2] = out[:, 3] = -np.log1p(t + t * t)
    else:
        # -2 Re(w^j log N / (N^sigma - w^j))
        x = n**sigma
        ln = np.log(n)
        out[:, 1] = -2 * ln / (x - 1)
        out[:, 2] = out[:, 3] = -2 * ln * (-0.5 * x - 1) / (x * x + x + 1)
    return out


def smoothed_weights(norms: np.ndarray, sigma: float, case: CaseKind, x: float, cutoff: int) -> np.ndarray:
    """Per-prime smoothed prime-power sums, sum_k Re(w^{jk}) f(N^k) exp(-N^k/X) over N^k <= cutoff.

    f(n) = 2 n^-sigma / k for the log case (the log L expansion) and
    -2 log(N) n^-sigma for the log-derivative case (von Mangoldt weights).
    """
    n = norms.astype(float)
    ln = np.log(n)
    a = np.zeros(n.size)  # k not divisible by 3: Re w^{jk} = 1 or -1/2
    b = np.zeros(n.size)  # k divisible by 3: Re w^{jk} = 1
    k = 1
    while True:
        nk = n**k
        live = nk <= cutoff
        if not live.any():
            break
        term = np.where(live, nk ** (-sigma) * np.exp(-nk / x), 0.0)
        term = 2 * term / k if case is CaseKind.LOG else -2 * ln * term
        if k % 3:
            a += term
        else:
            b += term
        k += 1
    out = np.zeros((n.size, 4))
    out[:, 1] = a + b
    out[:, 2] = out[:, 3] = -0.5 * a + b
    return out


def ramified_term(sigma: float, case: CaseKind, x: float | None = None) -> float:
    """Contribution of <1-w>, where chi_c = 1; x=None means undamped."""
    if x is None:
        if case is CaseKind.LOG:
            return -2 * math.log1p(-(3.0**-sigma))
        return -2 * LOG3 / (3.0**sigma - 1)
    total, k = 0.0, 1
    while 3.0**k <= 60 * x or k == 1:
        w = 3.0 ** (-k * sigma) * math.exp(-(3.0**k) / x)
        total += 2 * w / k if case is CaseKind.LOG else -2 * LOG3 * w
        k += 1
    return total


def gather(exps: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Sum over primes of weights[p, exps[..., p] + 1] (last axis of exps runs over primes)."""
    idx = exps.astype(np.intp) + 1
    cols = np.arange(weights.shape[0])
    return weights[cols, idx].sum(axis=-1)


def tail_bound(cutoff: int, sigma: float, case: CaseKind) -> float:
    """Crude bound for the Euler-product terms beyond the cutoff.

    Uses (prime ideals of norm <= x) <= 2.6 x / log x, with |term| <= 2.2 N^-sigma
    (times log N in the log-derivative case).
    """
    lp = math.log(cutoff)
    b = 2 * 2.2 * 2.6 * cutoff ** (1 - sigma) / ((sigma - 1) * lp)
    if case is CaseKind.LOGDERIV:
        b *= lp + 1 / (sigma - 1)
    return b


# ---------------------------------------------------------------- sigma > 1


def _euler(c: ModulusC | EisensteinInt, sigma: float, case: CaseKind, params: EvalParams) -> LValue:
    _check_sigma_gt1(sigma)
    v = c.value if isinstance(c, ModulusC) else c
    table = prime_table(params.prime_cutoff)
    exps = chi_at_primes(v, table)
    val = ramified_term(sigma, case) + float(gather(exps, euler_weights(table.norm, sigma, case)))
    return LValue(val, tail_bound(params.prime_cutoff, sigma, case))


def log_Lc(c: ModulusC | EisensteinInt, sigma: float, params: EvalParams = EvalParams()) -> LValue:
    """log L_c(sigma) = -2 log(1-3^-sigma) - 2 sum log|1 - chi_c(p) N(p)^-sigma|, sigma > 1."""
    return _euler(c, sigma, CaseKind.LOG, params)


def logderiv_Lc(c: ModulusC | EisensteinInt, sigma: float, params: EvalParams = EvalParams()) -> LValue:
    """L_c'/L_c(sigma) = -2 log3/(3^sigma-1) - 2 sum Re(chi log N/(N^sigma - chi)), sigma > 1."""
    return _euler(c, sigma, CaseKind.LOGDERIV, params)


# ---------------------------------------------------------------- smoothed

_SHELL = 2_000_000


def _series_sums(c: EisensteinInt, sigma: float, xs: tuple[float, ...], cutoff: int) -> list[complex]:
    """S_X = sum over a = 1 mod 3, N(a) <= cutoff, of (c/a)_3 N(a)^-sigma exp(-N(a)/X), for each X.

    (c/a)_3 = (a/c)_3 by reciprocity (both primary), evaluated in the residue
    fields of the prime factors of c.
    """
    sums = [0j for _ in xs]
    lo = 0
    step = max(_SHELL * 2, 10)  # norm width giving about _SHELL lattice points
    while lo < cutoff:
        hi = min(cutoff, lo + step)
        a, b, n = lattice_points(hi, 1, 0, 3, lo)
        if n.size:
            e = exponents_mod_element(a, b, c)
            live = e >= 0
            z = _W[e[live]]
            base = n[live].astype(float) ** (-sigma)
            for i, x in enumerate(xs):
                sums[i] += complex(np.sum(z * (base * np.exp(-n[live] / x))))
        lo = hi
    return sums


def _series_log(c: EisensteinInt, sigma: float, xs: tuple[float, ...], cutoff: int) -> list[float]:
    pre = 3.0**sigma / (3.0**sigma - 1)
    out = []
    for s in _series_sums(c, sigma, xs, cutoff):
        mod2 = abs(pre * s) ** 2
        if mod2 < ZERO_THRESHOLD:
            raise ExcludedValue(f"|L(sigma, chi_c)|^2 = {mod2:.3g} for c = {c}")
        out.append(math.log(mod2))
    return out


def _prime_sums(c: EisensteinInt, sigma: float, xs: tuple[float, ...], cutoff: int) -> np.ndarray:
    """Rows: X values; columns: (log case, logderiv case)."""
    table = prime_table(cutoff)
    exps = chi_at_primes(c, table)
    out = np.empty((len(xs), 2))
    for i, x in enumerate(xs):
        for j, case in enumerate(CaseKind):
            w = smoothed_weights(table.norm, sigma, case, x, cutoff)
            out[i, j] = ramified_term(sigma, case, x) + float(gather(exps, w))
    return out


def value_smoothed(
    c: ModulusC | EisensteinInt,
    sigma: float,
    case: CaseKind,
    params: EvalParams = EvalParams(),
    method: str = "series",
) -> LValue:
    """L_c-type value at sigma > 1/2 from damped sums, error from X versus 2X.

    Meant for 1/2 < sigma <= 1; slightly larger sigma is accepted so the
    result can be compared with the Euler product where both converge.

    method="series" (log case only) damps the Dirichlet series of L(s, chi_c)
    itself; method="primes" damps the prime-power expansion of log L or of
    L'/L.  The log-derivative case always uses the prime-power sum.
    """
    case = CaseKind.parse(case)
    if not sigma > 0.5:
        raise ValueError("value_smoothed needs sigma > 1/2")
    v = c.value if isinstance(c, ModulusC) else c
    x = params.smoothing_for(v.norm(), sigma)
    cutoff = params.cutoff_for(2 * x)
    if case is CaseKind.LOG and method == "series":
        v1, v2 = _series_log(v, sigma, (x, 2 * x), cutoff)
        return LValue(v1, abs(v2 - v1))
    if method not in ("series", "primes"):
        raise ValueError(f"unknown method {method!r}")
    sums = _prime_sums(v, sigma, (x, 2 * x), cutoff)
    if math.exp(sums[0, 0]) < ZERO_THRESHOLD:
        raise ExcludedValue(f"L_c({sigma}) below threshold for c = {v}")
    col = 0 if case is CaseKind.LOG else 1
    return LValue(float(sums[0, col]), float(abs(sums[1, col] - sums[0, col])))


def brauer_siegel_error(c: ModulusC | EisensteinInt, params: EvalParams = EvalParams(), method: str = "series") -> LValue:
    """E(c) = log(h_c R_c) - log sqrt|D_c| = log L_c(1) - log(4 sqrt(3) pi^2)."""
    v = value_smoothed(c, 1.0, CaseKind.LOG, params, method)
    return LValue(v.value - BS_SHIFT, v.err_est)


def euler_kronecker(c: ModulusC | EisensteinInt, gamma_k: float, params: EvalParams = EvalParams()) -> LValue:
    """gamma of the cubic field K_c = L_c'/L_c(1) + gamma_k."""
    v = value_smoothed(c, 1.0, CaseKind.LOGDERIV, params)
    return LValue(v.value + gamma_k, v.err_est)


# ---------------------------------------------------------------- cross oracle


def _flat_top(u: np.ndarray) -> np.ndarray:
    """Smooth weight equal to 1 on [0,1], 0 beyond 2, C-infinity in between."""
    u = np.asarray(u, dtype=float)
    out = np.where(u <= 1, 1.0, 0.0)
    mid = (u > 1) & (u < 2)
    t = u[mid] - 1
    f = lambda s: np.where(s > 0, np.exp(-1 / np.where(s > 0, s, 1)), 0.0)  # noqa: E731
    out[mid] = f(1 - t) / (f(1 - t) + f(t))
    return out


def dirichlet_Lc(c: ModulusC | EisensteinInt, sigma: float, x: float = 1e6) -> float:
    """log L_c(sigma) from the double Dirichlet series of L(s,chi) L(s,conj chi).

    3^{2s}/(3^s-1)^2 sum_{a,b = 1 mod 3} (c/a)_3 conj((c/b)_3) N(ab)^-s, with a
    flat-top weight on each of N(a), N(b) at scale x; the double sum
    factors as |S|^2 at real s.
    """
    v = c.value if isinstance(c, ModulusC) else c
    a, b, n = lattice_points(int(2 * x), 1, 0, 3)
    e = exponents_mod_element(a, b, v)
    live = e >= 0
    s = np.sum(_W[e[live]] * n[live].astype(float) ** (-sigma) * _flat_top(n[live] / x))
    pre = 9.0**sigma / (3.0**sigma - 1) ** 2
    return math.log(pre * abs(s) ** 2)


# ---------------------------------------------------------------- batches


@dataclass(frozen=True)
class BatchResult:
    log: np.ndarray
    logderiv: np.ndarray
    log_err: np.ndarray
    logderiv_err: np.ndarray
    excluded: np.ndarray


def batch_values(
    a: np.ndarray,
    b: np.ndarray,
    sigma: float,
    params: EvalParams,
    block: int = 96,
) -> BatchResult:
    """Both cases for many moduli c = a + b*w at once.

    sigma > 1 uses the Euler product up to params.prime_cutoff (error is the
    tail bound).  sigma <= 1 uses the damped prime-power sums with a common
    X = params.smoothing (error from X versus 2X).
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if sigma > 1:
        table = prime_table(params.prime_cutoff)
        wl = [euler_weights(table.norm, sigma, CaseKind.LOG)]
        wd = [euler_weights(table.norm, sigma, CaseKind.LOGDERIV)]
        rl = [ramified_term(sigma, CaseKind.LOG)]
        rd = [ramified_term(sigma, CaseKind.LOGDERIV)]
    else:
        if params.smoothing is None:
            raise ValueError("batch evaluation at sigma <= 1 needs an explicit smoothing X")
        x = float(params.smoothing)
        cutoff = params.cutoff_for(2 * x)
        table = prime_table(cutoff)
        wl = [smoothed_weights(table.norm, sigma, CaseKind.LOG, xx, cutoff) for xx in (x, 2 * x)]
        wd = [smoothed_weights(table.norm, sigma, CaseKind.LOGDERIV, xx, cutoff) for xx in (x, 2 * x)]
        rl = [ramified_term(sigma, CaseKind.LOG, xx) for xx in (x, 2 * x)]
        rd = [ramified_term(sigma, CaseKind.LOGDERIV, xx) for xx in (x, 2 * x)]
    n = a.size
    res_l = np.empty((len(wl), n))
    res_d = np.empty((len(wl), n))
    for lo in range(0, n, block):
        exps = chi_block(a[lo : lo + block], b[lo : lo + block], table)
        for i in range(len(wl)):
            res_l[i, lo : lo + block] = rl[i] + gather(exps, wl[i])
            res_d[i, lo : lo + block] = rd[i] + gather(exps, wd[i])
    if sigma > 1:
        el = np.full(n, tail_bound(params.prime_cutoff, sigma, CaseKind.LOG))
        ed = np.full(n, tail_bound(params.prime_cutoff, sigma, CaseKind.LOGDERIV))
    else:
        el = np.abs(res_l[1] - res_l[0])
        ed = np.abs(res_d[1] - res_d[0])
    excluded = res_l[0] < math.log(ZERO_THRESHOLD)
    return BatchResult(res_l[0], res_d[0], el, ed, excluded)


def chi_block(a: np.ndarray, b: np.ndarray, table: PrimeTable) -> np.ndarray:
    """(moduli x primes) matrix of exponents of (c/pi)_3."""
    from .cubic_symbol import _exponents_inert, _exponents_split

    out = np.empty((a.size, len(table)), dtype=np.int8)
    sp = table.split
    out[:, sp] = _exponents_split(a[:, None], b[:, None], table.p[sp][None, :], table.root[sp][None, :])
    if (~sp).any():
        out[:, ~sp] = _exponents_inert(a[:, None], b[:, None], table.p[~sp][None, :])
    return out


# ---------------------------------------------------------------- gamma_k


def gamma_k_reference(dps: int = 30) -> float:
    """Euler-Kronecker constant of Q(sqrt(-3)): gamma + L'(1,chi_-3)/L(1,chi_-3).

    With L(s, chi_-3) = 3^-s (zeta(s,1/3) - zeta(s,2/3)) and the Laurent
    expansion zeta(s,a) = 1/(s-1) + sum_n (-1)^n gamma_n(a) (s-1)^n / n!
    (generalized Stieltjes constants) the poles cancel, giving
    gamma_k = gamma - log 3 - (g1(1/3) - g1(2/3)) / (g0(1/3) - g0(2/3)).
    """
    import mpmath as mp

    with mp.workdps(dps):
        a, b = mp.mpf(1) / 3, mp.mpf(2) / 3
        g0 = mp.stieltjes(0, a) - mp.stieltjes(0, b)
        g1 = mp.stieltjes(1, a) - mp.stieltjes(1, b)
        return float(mp.euler - mp.log(3) - g1 / g0)


def gamma_k_richardson(levels: int = 6, h0: float = 0.05, dps: int = 30) -> float:
    """lim_{s->1} zeta_k'/zeta_k(s) + 1/(s-1), extrapolated from s = 1 + h0/2^i.

    zeta_k = zeta * L(., chi_-3), with the L-part summed directly as
    sum_m (3m+1)^-s - (3m+2)^-s (and its derivative) by Euler-Maclaurin summation.
    """
    import mpmath as mp

    with mp.workdps(dps):

        def f(s):
            lval = mp.nsum(lambda m: (3 * m + 1) ** (-s) - (3 * m + 2) ** (-s), [0, mp.inf], method="e")
            ldv = mp.nsum(
                lambda m: -mp.log(3 * m + 1) * (3 * m + 1) ** (-s) + mp.log(3 * m + 2) * (3 * m + 2) ** (-s),
                [0, mp.inf],
                method="e",
            )
            z = mp.zeta(s)
            zd = mp.zeta(s, 1, 1)
            return zd / z + 1 / (s - 1) + ldv / lval

        hs = [mp.mpf(h0) / 2**i for i in range(levels)]
        table = [[f(1 + h) for h in hs]]
        # f is analytic at 1, so the error expands in powers of h
        for k in range(1, levels):
            prev = table[-1]
            table.append([(2**k * prev[i + 1] - prev[i]) / (2**k - 1) for i in range(len(prev) - 1)])
        return float(table[-1][0])


def with_smoothing(params: EvalParams, x: float) -> EvalParams:
    return replace(params, smoothing=x)
