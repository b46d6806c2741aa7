"""Empirical side: L-values over the modulus family, their CDFs, and counting checks."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .cubic_symbol import exponents_mod_prime
from .density import DensityGrid
from .eisenstein import (
    UNITS,
    EisensteinInt,
    ModulusC,
    PrimeIdealRec,
    Splitting,
    factor,
    moduli_arrays,
    prime_ideal_norms,
    residue_root,
)
from .lfunction import BS_SHIFT, CaseKind, EvalParams, batch_values
from .stats import StepCDF, ks_to_cdf

DEFAULT_SMOOTHING = 5_000.0
_WEIGHT_SPAN = 30  # N(c) / Y beyond which exp(-N/Y) < 1e-13


@dataclass(frozen=True)
class EmpiricalSample:
    modulus: ModulusC
    value: float | None
    excluded: bool

    def __post_init__(self) -> None:
        if self.excluded and self.value is not None:
            raise ValueError("excluded samples carry no value")


@dataclass(frozen=True)
class EmpiricalSet:
    """Values of one case over all c with N(c) <= Y (sorted by norm, a, b)."""

    Y: int
    sigma: float
    case: CaseKind
    norm: np.ndarray
    a: np.ndarray
    b: np.ndarray
    value: np.ndarray  # nan where excluded
    excluded: np.ndarray

    @property
    def n_samples(self) -> int:
        return int((~self.excluded).sum())

    @property
    def n_excluded(self) -> int:
        return int(self.excluded.sum())

    def samples(self) -> list[EmpiricalSample]:
        return [
            EmpiricalSample(ModulusC(EisensteinInt(int(a), int(b)), int(n)), None if x else float(v), bool(x))
            for n, a, b, v, x in zip(self.norm, self.a, self.b, self.value, self.excluded)
        ]

    def cdf(self, weighted: bool = False) -> StepCDF:
        keep = ~self.excluded
        w = np.exp(-self.norm[keep] / self.Y) if weighted else None
        return StepCDF.from_samples(self.value[keep], w)

    def shifted(self, delta: float) -> EmpiricalSet:
        return EmpiricalSet(self.Y, self.sigma, self.case, self.norm, self.a, self.b, self.value + delta, self.excluded)


def cache_dir() -> Path:
    return Path(os.environ.get("CUBIC_DIST_CACHE", "cache"))


def _params_key(Y: int, sigma: float, case: CaseKind, params: EvalParams) -> str:
    blob = json.dumps({"Y": Y, "sigma": sigma, "case": case.value, "params": asdict(params)}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _write_cache(path: Path, s: EmpiricalSet) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with tmp.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["norm", "a", "b", "value", "excluded"])
        for n, a, b, v, x in zip(s.norm, s.a, s.b, s.value, s.excluded):
            w.writerow([int(n), int(a), int(b), "" if x else repr(float(v)), int(x)])
    tmp.replace(path)


def _read_cache(path: Path, Y: int, sigma: float, case: CaseKind) -> EmpiricalSet:
    rows = list(csv.DictReader(path.open(newline="")))
    norm = np.array([int(r["norm"]) for r in rows], dtype=np.int64)
    a = np.array([int(r["a"]) for r in rows], dtype=np.int64)
    b = np.array([int(r["b"]) for r in rows], dtype=np.int64)
    excluded = np.array([r["excluded"] == "1" for r in rows], dtype=bool)
    value = np.array([float(r["value"]) if r["value"] else math.nan for r in rows])
    for aa, bb, nn in zip(a.tolist(), b.tolist(), norm.tolist()):
        ModulusC(EisensteinInt(aa, bb), nn)  # re-validate on load
    return EmpiricalSet(Y, sigma, case, norm, a, b, value, excluded)


def _with_default_smoothing(sigma: float, params: EvalParams) -> EvalParams:
    if sigma <= 1 and params.smoothing is None:
        return EvalParams(params.prime_cutoff, DEFAULT_SMOOTHING, params.series_cutoff)
    return params


def empirical_values(Y: int, sigma: float, params: EvalParams = EvalParams(), use_cache: bool = True) -> dict[CaseKind, EmpiricalSet]:
    """Both cases over N(c) <= Y; cached per case as cache/samples_<hash>.csv.

    For sigma <= 1 all moduli share one smoothing X (DEFAULT_SMOOTHING unless
    params sets it).
    """
    if Y < 73:
        raise ValueError("Y must be >= 73")
    params = _with_default_smoothing(sigma, params)
    paths = {case: cache_dir() / f"samples_{_params_key(Y, sigma, case, params)}.csv" for case in CaseKind}
    if use_cache and all(p.exists() for p in paths.values()):
        return {case: _read_cache(p, Y, sigma, case) for case, p in paths.items()}
    a, b, n = moduli_arrays(Y)
    order = np.lexsort((b, a, n))
    a, b, n = a[order], b[order], n[order]
    res = batch_values(a, b, sigma, params)
    excluded = res.excluded
    out = {
        CaseKind.LOG: EmpiricalSet(Y, sigma, CaseKind.LOG, n, a, b, np.where(excluded, math.nan, res.log), excluded),
        CaseKind.LOGDERIV: EmpiricalSet(Y, sigma, CaseKind.LOGDERIV, n, a, b, np.where(excluded, math.nan, res.logderiv), excluded),
    }
    if use_cache:
        for case, p in paths.items():
            _write_cache(p, out[case])
    return out


def empirical_cdf(Y: int, sigma: float, case: CaseKind, params: EvalParams = EvalParams(), use_cache: bool = True) -> EmpiricalSet:
    return empirical_values(Y, sigma, params, use_cache)[CaseKind.parse(case)]


def ks_distance(empirical: EmpiricalSet | StepCDF, predicted: DensityGrid, weighted: bool = False) -> float:
    emp = empirical.cdf(weighted) if isinstance(empirical, EmpiricalSet) else empirical
    return ks_to_cdf(emp, predicted.cdf)


def decreasing_with_slack(values, slack: float = 0.2) -> bool:
    v = list(values)
    return all(v[i + 1] <= (1 + slack) * v[i] for i in range(len(v) - 1))


def corollary_sets(values: dict[CaseKind, EmpiricalSet], gamma_k: float) -> tuple[EmpiricalSet, EmpiricalSet]:
    """(E(c) values, Euler-Kronecker constants) from sigma = 1 values of both cases."""
    return values[CaseKind.LOG].shifted(-BS_SHIFT), values[CaseKind.LOGDERIV].shifted(gamma_k)


# ---------------------------------------------------------------- local statistics


def _divisible(prime: PrimeIdealRec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    root = residue_root(prime) if prime.splitting is Splitting.SPLIT else -1
    return exponents_mod_prime(a, b, prime.p, root) < 0


@dataclass(frozen=True)
class Frequency:
    observed: float
    expected: float
    n: int

    @property
    def sd(self) -> float:
        return math.sqrt(self.expected * (1 - self.expected) / self.n) if self.n else math.inf

    @property
    def z(self) -> float:
        return (self.observed - self.expected) / self.sd if self.sd > 0 else 0.0

    def within(self, k: float = 3.0) -> bool:
        return abs(self.observed - self.expected) <= k * self.sd


def divisor_probability(prime: PrimeIdealRec, Y: int) -> Frequency:
    """Share of c in the family with N(c) <= Y divisible by the prime, against 1/(N+1)."""
    if prime.splitting is Splitting.RAMIFIED:
        raise ValueError("prime must be unramified")
    a, b, _ = moduli_arrays(Y)
    if a.size == 0:
        raise ValueError("no moduli up to Y")
    return Frequency(float(_divisible(prime, a, b).mean()), 1 / (prime.norm + 1), a.size)


def symbol_frequencies(prime: PrimeIdealRec, Y: int) -> list[Frequency]:
    """Shares of chi_c(p) = w^j for j = 0, 1, 2, each against N/(3(N+1))."""
    a, b, _ = moduli_arrays(Y)
    root = residue_root(prime) if prime.splitting is Splitting.SPLIT else -1
    e = exponents_mod_prime(a, b, prime.p, root)
    q = prime.norm / (3 * (prime.norm + 1))
    return [Frequency(float((e == j).mean()), q, a.size) for j in range(3)]


# ---------------------------------------------------------------- counting


@dataclass(frozen=True)
class CountReport:
    Y: int
    count: int
    weighted: float
    predicted_slope: float

    def __post_init__(self) -> None:
        if self.count < 0 or self.weighted < 0:
            raise ValueError("counts must be non-negative")

    @property
    def sane(self) -> bool:
        """Coarse check weighted <= e * count (only meaningful once count > 0)."""
        return self.count == 0 or self.weighted <= math.e * self.count

    @property
    def ratio(self) -> float:
        return self.count / self.Y / self.predicted_slope

    @property
    def weighted_ratio(self) -> float:
        return self.weighted / self.Y / self.predicted_slope


def residue_zeta_k() -> float:
    """res_{s=1} zeta_k = 2 pi h R / (w sqrt|d|) with h = 1, R = 1, w = 6, d = -3."""
    h, w, d = 1, 6, 3
    return 2 * math.pi * h / (w * math.sqrt(d))


def ray_class_order_9() -> int:
    """|(O/9)^x / image of units|, by listing residues a + b*w mod 9."""
    nine = EisensteinInt(9, 0)
    invertible = {(a, b) for a in range(9) for b in range(9) if (a + b) % 3}
    seen: set[tuple[int, int]] = set()
    orbits = 0
    for r in sorted(invertible):
        if r in seen:
            continue
        orbits += 1
        x = EisensteinInt(*r)
        for u in UNITS:
            y = (u * x) % nine
            seen.add((y.a % 9, y.b % 9))
    assert seen == invertible
    return orbits


@lru_cache(maxsize=2)
def zeta_k_2(max_norm: int = 10_000_000) -> float:
    """zeta_k(2) as an Euler product over prime ideals of norm <= max_norm, plus an integral tail estimate."""
    from scipy import integrate

    n = np.r_[3.0, prime_ideal_norms(max_norm)]  # the table omits the ramified prime
    log_prod = -np.sum(np.log1p(-(n**-2.0)))
    tail = integrate.quad(lambda x: 1 / (x * x * math.log(x)), max_norm, np.inf)[0]
    return float(math.exp(log_prod + tail))


def predicted_slope() -> float:
    return 3 * residue_zeta_k() / (4 * ray_class_order_9() * zeta_k_2())


def _coprime_mask(a: np.ndarray, b: np.ndarray, primes: list[PrimeIdealRec]) -> np.ndarray:
    keep = np.ones(a.shape, dtype=bool)
    for p in primes:
        keep &= ~_divisible(p, a, b)
    return keep


def _counts(Y: int, primes: list[PrimeIdealRec]) -> tuple[int, float]:
    count, weighted = 0, 0.0
    lo = 0
    while lo < _WEIGHT_SPAN * Y:
        hi = min(lo + Y, _WEIGHT_SPAN * Y)
        a, b, n = moduli_arrays(hi, lo)
        keep = _coprime_mask(a, b, primes)
        if lo < Y:
            count += int(keep.sum())
        weighted += float(np.exp(-n[keep] / Y).sum())
        lo = hi
    return count, weighted


def count_C(Y: int) -> CountReport:
    """Exact count of the family up to Y and the weighted count sum exp(-N(c)/Y)."""
    if Y < 1:
        raise ValueError("Y must be positive")
    count, weighted = _counts(Y, [])
    return CountReport(Y, count, weighted, predicted_slope())


@dataclass(frozen=True)
class RestrictedCount:
    count: int
    weighted: float
    predicted: float

    @property
    def ratio(self) -> float:
        return self.weighted / self.predicted


def restricted_count(ideal: EisensteinInt, Y: int) -> RestrictedCount:
    """Counts of c coprime to the ideal against C_a Y, C_a = slope * prod_{p | a} (1 + 1/N(p))^-1."""
    if (ideal.a + ideal.b) % 3 == 0:
        raise ValueError("ideal must be coprime to 3")
    primes = [p for p, _ in factor(ideal)]
    factor_c = math.prod(1 / (1 + 1 / p.norm) for p in primes)
    count, weighted = _counts(Y, primes)
    return RestrictedCount(count, weighted, predicted_slope() * factor_c * Y)
