"""The twelve acceptance checks, runnable at two scales.

Each check returns a Result with a pass flag, the measured numbers and the
thresholds.  Profiles differ only where the criteria allow it (the sample
sizes of the arithmetic empirical distributions); everything else runs at
the stated scale in both.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import __version__
from .charfn import char_fn, coeff_G, coeff_H, decay_check, dirichlet_M
from .cubic_symbol import CubeRoot, symbol, symbol_composite_oracle, symbol_prime_oracle
from .density import DensityGrid, invert, mean_from_charfn
from .eisenstein import EisensteinInt, enumerate_C, enumerate_primes, primary_associate
from .empirics import (
    corollary_sets,
    count_C,
    decreasing_with_slack,
    divisor_probability,
    empirical_values,
    ks_distance,
    restricted_count,
    symbol_frequencies,
)
from .lfunction import (
    BS_SHIFT,
    CaseKind,
    EvalParams,
    dirichlet_Lc,
    euler_kronecker,
    gamma_k_reference,
    gamma_k_richardson,
    log_Lc,
    logderiv_Lc,
)
from .randmodel import ModelConfig, model_cdf, sample_sum
from .stats import ks_to_cdf

SEED = 20240607


@dataclass(frozen=True)
class Profile:
    name: str
    ks_Y: int  # Y of the headline empirical KS in check 9
    ks_threshold: float
    ks_schedule: tuple[int, ...]
    corollary_Y: int = 100_000
    mc_samples: int = 1_000_000


PROFILES = {
    "quick": Profile("quick", 10_000, 0.10, (1_000, 10_000)),
    "full": Profile("full", 1_000_000, 0.05, (1_000, 10_000, 100_000, 1_000_000)),
}


@dataclass
class Result:
    id: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"criterion {self.id:2d} [{'PASS' if self.passed else 'FAIL'}] {self.name} ({self.seconds:.1f}s)"

    def as_json(self) -> dict:
        return {"id": self.id, "name": self.name, "passed": self.passed, "seconds": round(self.seconds, 3),
                "details": _clean(self.details)}


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@lru_cache(maxsize=8)
def density_grid(sigma: float, case: CaseKind) -> DensityGrid:
    return invert(sigma, case)


def _shifted_cdf(grid: DensityGrid, shift: float):
    return lambda z: grid.cdf(np.asarray(z) - shift)


# ---------------------------------------------------------------- 1, 2: symbols


def check_symbol_oracle(profile: Profile) -> Result:
    rng = np.random.default_rng(SEED)
    primes = [p for p in enumerate_primes(10_000) if p.norm != 3]
    mismatches = total = 0
    t0 = time.perf_counter()
    for p in primes:
        coords = rng.integers(-10**6, 10**6, size=(100, 2))
        for a, b in coords.tolist():
            alpha = EisensteinInt(a, b)
            total += 1
            mismatches += symbol(alpha, p.generator) != symbol_prime_oracle(alpha, p.generator)
    dt = time.perf_counter() - t0
    return Result(1, "symbol oracle equivalence", mismatches == 0 and dt < 60,
                  {"primes": len(primes), "pairs": total, "mismatches": mismatches, "runtime_s": dt, "limit_s": 60})


def _random_primary(rng: np.random.Generator, bound: int) -> EisensteinInt:
    while True:
        a, b = rng.integers(-bound, bound + 1, size=2).tolist()
        x = EisensteinInt(a, b)
        if x and (a + b) % 3 and not x.is_unit():
            return primary_associate(x)[1]


def check_reciprocity(profile: Profile) -> Result:
    rng = np.random.default_rng(SEED + 2)
    flips = flip_fail = 0
    while flips < 1000:
        alpha, lam = _random_primary(rng, 300), _random_primary(rng, 300)
        if symbol_composite_oracle(alpha, lam).is_zero:
            continue  # not coprime
        flips += 1
        oracle_ok = symbol_composite_oracle(alpha, lam) == symbol_composite_oracle(lam, alpha)
        fast_ok = symbol(alpha, lam) == symbol(lam, alpha)
        flip_fail += not (oracle_ok and fast_ok)
    supp_fail = 0
    zeta, ram = EisensteinInt(0, 1), EisensteinInt(1, -1)
    for _ in range(1000):
        lam = _random_primary(rng, 300)
        m, n = (lam.a - 1) // 3, lam.b // 3
        ok = symbol_composite_oracle(zeta, lam) == CubeRoot.of(-(m + n))
        ok &= symbol_composite_oracle(ram, lam) == CubeRoot.of(m)
        ok &= symbol_composite_oracle(EisensteinInt(-1, 0), lam) == CubeRoot(0)
        ok &= symbol(zeta, lam) == CubeRoot.of(-(m + n)) and symbol(ram, lam) == CubeRoot.of(m)
        supp_fail += not ok
    return Result(2, "reciprocity and supplementary laws", flip_fail == 0 and supp_fail == 0,
                  {"pairs": flips, "flip_failures": flip_fail, "lambdas": 1000, "supplementary_failures": supp_fail})


# ---------------------------------------------------------------- 3: generating functions

GF_U = (0.5, -0.5, 1.0, 1j, 2j, -1 + 1j)
GF_RADII = (0.1, 0.2, 0.3, 0.4, 0.5)


def generating_function_errors(terms: int = 30) -> dict[float, tuple[float, float]]:
    """Max |truncated sum - closed form| over u in GF_U and arg t, per |t|, for G and H."""
    out = {}
    for rad in GF_RADII:
        eg = eh = 0.0
        for ang in np.linspace(0, 2 * np.pi, 12, endpoint=False):
            t = rad * complex(np.exp(1j * ang))
            for u in GF_U:
                sg = sum(coeff_G(r, u) * t**r for r in range(terms + 1))
                sh = sum(coeff_H(r, u) * t**r for r in range(terms + 1))
                eg = max(eg, abs(sg - np.exp(u * t / (1 - t))))
                eh = max(eh, abs(sh - np.exp(-u * np.log(1 - t))))
        out[rad] = (eg, eh)
    return out


def check_generating_functions(profile: Profile) -> Result:
    errs = generating_function_errors(30)
    worst = max(max(v) for v in errs.values())
    return Result(3, "generating-function identities", worst < 1e-10,
                  {"terms": 30, "u_values": [str(u) for u in GF_U], "max_error_by_radius": {str(k): list(v) for k, v in errs.items()},
                   "threshold": 1e-10})


# ---------------------------------------------------------------- 4: product vs series


def check_product_series(profile: Profile) -> Result:
    ys = np.array([0.0, 1.0, -1.0, 5.0, -5.0])
    rows, worst = [], 0.0
    for case in CaseKind:
        for sigma in (0.75, 1.0, 1.5):
            prod = char_fn(sigma, ys, case, 10**6)
            ser = dirichlet_M(sigma, ys, case, 10**6)
            for y, d in zip(ys, np.abs(prod - ser)):
                rows.append({"case": case.value, "sigma": sigma, "y": y, "diff": d, "ok": d <= 1e-4})
                worst = max(worst, d)
    n_ok = sum(r["ok"] for r in rows)
    return Result(4, "product-series duality", n_ok == len(rows),
                  {"truncation": 10**6, "points_ok": n_ok, "points": len(rows), "max_diff": worst, "grid": rows})


# ---------------------------------------------------------------- 5, 6: L-values


def _smallest_moduli(k: int = 50):
    cs = enumerate_C(2000)
    assert len(cs) >= k
    return cs[:k]


def check_lvalue_cross(profile: Profile) -> Result:
    params = EvalParams(prime_cutoff=10**6)
    diffs = []
    for c in _smallest_moduli():
        diffs.append(abs(log_Lc(c, 2.0, params).value - dirichlet_Lc(c, 2.0, x=1e6)))
    return Result(5, "L-value cross-oracle at sigma = 2", max(diffs) <= 1e-6,
                  {"moduli": len(diffs), "max_diff": max(diffs), "threshold": 1e-6})


def check_finite_difference(profile: Profile) -> Result:
    params = EvalParams()
    h, worst = 1e-4, 0.0
    for c in _smallest_moduli():
        fd = (log_Lc(c, 2 + h, params).value - log_Lc(c, 2 - h, params).value) / (2 * h)
        d = logderiv_Lc(c, 2.0, params).value
        worst = max(worst, abs(fd - d) / abs(d))
    return Result(6, "finite-difference duality", worst <= 1e-3, {"moduli": 50, "h": h, "max_rel_err": worst, "threshold": 1e-3})


# ---------------------------------------------------------------- 7, 8: density and decay


def check_density_moments(profile: Profile) -> Result:
    rows, ok = [], True
    for sigma in (1.0, 2.0):
        for case in CaseKind:
            g = density_grid(sigma, case)
            mass = g.total_mass()
            mean_cf = mean_from_charfn(sigma, case, g.meta["prime_cutoff"])
            good = abs(mass - 1) <= 1e-3 and abs(g.mean() - mean_cf) <= 1e-3
            ok &= good
            rows.append({"sigma": sigma, "case": case.value, "mass": mass, "mean": g.mean(), "mean_charfn": mean_cf,
                         "y_max": g.y_max, "refine_change": g.refine_change, "ok": good})
    return Result(7, "density normalization and moments", ok, {"rows": rows})


def check_decay(profile: Profile) -> Result:
    grid = np.arange(50.0, 500.0 + 1e-9, 0.25)
    rows, ok = [], True
    for case, (lo, hi) in ((CaseKind.LOG, (0.6, 1.3)), (CaseKind.LOGDERIV, (0.7, 1.3))):
        r = decay_check(1.0, case, grid, window=50.0, tail_from=200.0)
        good = r.decreasing and lo <= r.kappa <= hi and bool(np.all(r.abs_values <= 1))
        ok &= good
        rows.append({"case": case.value, "kappa": r.kappa, "kappa_range": [lo, hi], "C": r.C,
                     "window_max_log_abs": r.window_maxima.tolist(), "decreasing": r.decreasing, "ok": good})
    return Result(8, "decay of the characteristic function", ok, {"rows": rows, "window": 50.0})


# ---------------------------------------------------------------- 9, 12: distributions


def check_trilateral(profile: Profile, threads: int = 1) -> Result:
    rows, ok = [], True
    for case in CaseKind:
        g = density_grid(1.0, case)
        samples = sample_sum(ModelConfig(1.0, case, 100_000, profile.mc_samples, SEED), threads=threads)
        ks_mc = ks_to_cdf(model_cdf(samples), g.cdf)
        sched = {}
        for Y in profile.ks_schedule:
            vals = empirical_values(Y, 1.0)[case]
            sched[Y] = (ks_distance(vals, g), ks_distance(vals, g, weighted=True), vals.n_excluded)
        ks_emp = sched[profile.ks_Y][0]
        trend = decreasing_with_slack([sched[Y][0] for Y in profile.ks_schedule])
        good = ks_mc <= 0.02 and ks_emp <= profile.ks_threshold and trend
        ok &= good
        rows.append({"case": case.value, "ks_model": ks_mc, "ks_empirical": ks_emp, "Y": profile.ks_Y,
                     "threshold": profile.ks_threshold, "schedule": {str(k): list(v) for k, v in sched.items()},
                     "trend_ok": trend, "ok": good})
    return Result(9, "tri-lateral distribution agreement at sigma = 1", ok, {"rows": rows, "mc_samples": profile.mc_samples})


def check_corollaries(profile: Profile) -> Result:
    gk = gamma_k_richardson()
    gk_ref = gamma_k_reference()
    vals = empirical_values(profile.corollary_Y, 1.0)
    e_set, ek_set = corollary_sets(vals, gk)
    ks_e = ks_to_cdf(e_set.cdf(), _shifted_cdf(density_grid(1.0, CaseKind.LOG), -BS_SHIFT))
    ks_ek = ks_to_cdf(ek_set.cdf(), _shifted_cdf(density_grid(1.0, CaseKind.LOGDERIV), gk))
    # spot check: the single-modulus evaluator agrees with the batch values
    params = EvalParams(smoothing=5_000.0)
    spot = []
    for i in range(3):
        c = EisensteinInt(int(ek_set.a[i]), int(ek_set.b[i]))
        v = euler_kronecker(c, gk, params)
        spot.append(abs(v.value - ek_set.value[i]))
    good = ks_e <= 0.07 and ks_ek <= 0.07 and abs(gk - gk_ref) <= 1e-4
    return Result(12, "corollary pipeline", good,
                  {"Y": profile.corollary_Y, "ks_brauer_siegel": ks_e, "ks_euler_kronecker": ks_ek, "threshold": 0.07,
                   "gamma_k": gk, "gamma_k_reference": gk_ref, "spot_check_max_diff": max(spot)})


# ---------------------------------------------------------------- 10, 11: counting and local laws


def check_counting(profile: Profile) -> Result:
    r = count_C(10**7)
    rc = restricted_count(EisensteinInt(2, 0), 10**7)
    good = abs(r.ratio - 1) <= 0.02 and abs(r.weighted_ratio - 1) <= 0.02 and abs(rc.ratio - 1) <= 0.02
    return Result(10, "counting asymptotics", good,
                  {"Y": r.Y, "count": r.count, "weighted": r.weighted, "predicted_slope": r.predicted_slope,
                   "ratio": r.ratio, "weighted_ratio": r.weighted_ratio, "restricted_2_ratio": rc.ratio,
                   "restricted_2_count_ratio": rc.count / rc.predicted})


def check_local_heuristics(profile: Profile) -> Result:
    rows, ok = [], True
    seen = set()
    for p in enumerate_primes(13):
        if p.norm not in (4, 7, 13) or p.norm in seen:
            continue
        seen.add(p.norm)
        d = divisor_probability(p, 10**6)
        s = symbol_frequencies(p, 10**6)
        good = d.within(3) and all(f.within(3) for f in s)
        ok &= good
        rows.append({"norm": p.norm, "divisor": [d.observed, d.expected, d.z],
                     "symbols": [[f.observed, f.expected, f.z] for f in s], "ok": good})
    return Result(11, "local heuristics", ok, {"Y": 10**6, "rows": rows})


CHECKS = {
    1: check_symbol_oracle,
    2: check_reciprocity,
    3: check_generating_functions,
    4: check_product_series,
    5: check_lvalue_cross,
    6: check_finite_difference,
    7: check_density_moments,
    8: check_decay,
    9: check_trilateral,
    10: check_counting,
    11: check_local_heuristics,
    12: check_corollaries,
}


def run_check(cid: int, profile: str | Profile = "quick", threads: int = 1) -> Result:
    prof = PROFILES[profile] if isinstance(profile, str) else profile
    t0 = time.perf_counter()
    res = check_trilateral(prof, threads) if cid == 9 else CHECKS[cid](prof)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(profile: str = "quick", threads: int = 1, ids=None) -> dict:
    results = [run_check(i, profile, threads) for i in (ids or sorted(CHECKS))]
    return {"version": __version__, "profile": profile, "all_passed": all(r.passed for r in results),
            "criteria": [r.as_json() for r in results]}
