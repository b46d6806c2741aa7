"""Step CDFs and Kolmogorov-Smirnov distances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StepCDF:
    """Right-continuous empirical CDF of (optionally weighted) samples."""

    values: np.ndarray  # sorted
    weights: np.ndarray  # normalized, same order

    @classmethod
    def from_samples(cls, samples, weights=None) -> StepCDF:
        x = np.asarray(samples, dtype=float)
        if x.size == 0:
            raise ValueError("need at least one sample")
        if not np.all(np.isfinite(x)):
            raise ValueError("samples must be finite")
        w = np.ones(x.size) if weights is None else np.asarray(weights, dtype=float)
        if w.shape != x.shape or np.any(w < 0) or w.sum() <= 0:
            raise ValueError("bad weights")
        order = np.argsort(x, kind="stable")
        return cls(x[order], w[order] / w.sum())

    def __len__(self) -> int:
        return self.values.size

    def __call__(self, z) -> np.ndarray:
        cum = np.concatenate([[0.0], np.cumsum(self.weights)])
        idx = np.searchsorted(self.values, z, side="right")
        return np.minimum(cum[idx], 1.0)

    def jumps(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Distinct jump locations with the CDF just before and at each."""
        cum = np.cumsum(self.weights)
        last = np.r_[self.values[1:] != self.values[:-1], True]
        at = np.minimum(cum[last], 1.0)
        before = np.r_[0.0, at[:-1]]
        return self.values[last], before, at


def ks_to_cdf(emp: StepCDF, cdf) -> float:
    """sup |F_emp - F| for a continuous F, checked on both sides of every jump."""
    x, before, at = emp.jumps()
    f = np.asarray(cdf(x), dtype=float)
    return float(max(np.max(np.abs(at - f)), np.max(np.abs(before - f))))


def ks_two_sample(a: StepCDF, b: StepCDF) -> float:
    pts = np.union1d(a.values, b.values)
    return float(np.max(np.abs(a(pts) - b(pts))))
