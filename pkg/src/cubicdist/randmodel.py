"""Monte Carlo for the independent random model sum_p X_p.

For each unramified prime p with N(p) <= cutoff, X_p is 0 with probability
1/(N+1) and -a_{p,j} with probability N/(3(N+1)) for j = 0, 1, 2; the
ramified prime adds the constant -a_{<1-w>,0}.

Samples are generated in fixed blocks of BLOCK indices.  Block k draws from
PCG64 seeded by SeedSequence(seed, spawn_key=(k,)), so the output depends
only on the seed, never on the number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .charfn import _atom_table, ramified_shift
from .lfunction import CaseKind
from .stats import StepCDF

BLOCK = 8192
PRIME_CHUNK = 512


@dataclass(frozen=True)
class ModelConfig:
    sigma: float
    case: CaseKind
    prime_cutoff: int = 100_000
    n_samples: int = 1_000_000
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "case", CaseKind.parse(self.case))
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.prime_cutoff < 7:
            raise ValueError("prime_cutoff must be >= 7")
        if not self.sigma > 0.5:
            raise ValueError("need sigma > 1/2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _law(config: ModelConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cumulative thresholds (primes x 3) and atom values (primes x 4, outcome 0 first)."""
    norms, a, q = _atom_table(float(config.sigma), config.case, int(config.prime_cutoff))
    p0 = 1 / (norms + 1)
    thresholds = np.stack([p0, p0 + q, p0 + 2 * q], axis=1)
    values = np.concatenate([np.zeros((norms.size, 1)), -a], axis=1)
    return thresholds, values, norms


def draw_outcomes(u: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Outcome index per uniform: 0 for X_p = 0, 1 + j for -a_{p,j}."""
    return ((u >= thresholds[:, 0]).astype(np.int8) + (u >= thresholds[:, 1]) + (u >= thresholds[:, 2])).astype(np.int8)


def _rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _block(config: ModelConfig, law, k: int) -> np.ndarray:
    thresholds, values, _ = law
    n = min(BLOCK, config.n_samples - k * BLOCK)
    rng = _rng(config.seed, k)
    out = np.zeros(n)
    for lo in range(0, thresholds.shape[0], PRIME_CHUNK):
        th = thresholds[lo : lo + PRIME_CHUNK]
        u = rng.random((n, th.shape[0]))
        steps = np.diff(values[lo : lo + PRIME_CHUNK], axis=1)
        # value of outcome k is the sum of the first k steps; the j = 1 -> 2
        # step vanishes for real sigma and is skipped then
        for col in range(3):
            if steps[:, col].any():
                out += (u >= th[:, col]).astype(np.float64) @ steps[:, col]
    return out


def sample_sum(config: ModelConfig, threads: int = 1) -> np.ndarray:
    """n_samples independent draws of the truncated random sum."""
    law = _law(config)
    shift = ramified_shift(config.sigma, config.case)
    nblocks = -(-config.n_samples // BLOCK)
    if threads == 1 or nblocks == 1:
        parts = [_block(config, law, k) for k in range(nblocks)]
    else:
        with ThreadPoolExecutor(max_workers=threads or None) as pool:
            parts = list(pool.map(lambda k: _block(config, law, k), range(nblocks)))
    return shift + np.concatenate(parts)


def sample_outcomes(config: ModelConfig) -> np.ndarray:
    """Outcome matrix (samples x primes) behind sample_sum, for small cutoffs only."""
    thresholds = _law(config)[0]
    if thresholds.shape[0] > PRIME_CHUNK:
        raise ValueError("only for cutoffs with at most PRIME_CHUNK primes")
    parts = []
    for k in range(-(-config.n_samples // BLOCK)):
        n = min(BLOCK, config.n_samples - k * BLOCK)
        parts.append(draw_outcomes(_rng(config.seed, k).random((n, thresholds.shape[0])), thresholds))
    return np.concatenate(parts)


def model_cdf(samples) -> StepCDF:
    return StepCDF.from_samples(samples)


def empirical_charfn(samples, y: float) -> tuple[complex, float]:
    """Sample mean of exp(iyX) and its standard error."""
    e = np.exp(1j * y * np.asarray(samples, dtype=float))
    m = e.mean()
    se = float(np.sqrt(np.mean(np.abs(e - m) ** 2) / e.size))
    return complex(m), se
