"""Empirical distributions, two-sample distances and percentile bootstrap."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    samples: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.sort(np.asarray(self.samples, dtype=float).ravel())
        if s.size == 0:
            raise ValueError("an empirical distribution needs at least one sample")
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return self.samples.size

    def cdf(self, x):
        return np.searchsorted(self.samples, x, side="right") / self.n

    def quantile(self, q):
        """Left-continuous inverse of the ECDF."""
        q = np.asarray(q, dtype=float)
        idx = np.clip(np.ceil(q * self.n).astype(int) - 1, 0, self.n - 1)
        return self.samples[idx]

    def mean(self) -> float:
        return float(self.samples.mean())

    def negated(self) -> "EmpiricalDistribution":
        return EmpiricalDistribution(-self.samples, dict(self.provenance))

    def ecdf_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "cdf"])
        for i, v in enumerate(self.samples, 1):
            w.writerow([repr(float(v)), repr(i / self.n)])
        return buf.getvalue()


def _as_sorted(x) -> np.ndarray:
    if isinstance(x, EmpiricalDistribution):
        return x.samples
    s = np.sort(np.asarray(x, dtype=float).ravel())
    if s.size == 0:
        raise ValueError("empty sample")
    return s


def ks_distance(p, q) -> float:
    """Two-sample Kolmogorov-Smirnov statistic ``sup |F_p - F_q|``."""
    a, b = _as_sorted(p), _as_sorted(q)
    pooled = np.concatenate((a, b))
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def wasserstein1(p, q) -> float:
    """``int |F_p - F_q| dx`` between the two ECDFs."""
    a, b = _as_sorted(p), _as_sorted(q)
    if a.size == b.size:
        return float(np.mean(np.abs(a - b)))
    pooled = np.sort(np.concatenate((a, b)))
    widths = np.diff(pooled)
    fa = np.searchsorted(a, pooled[:-1], side="right") / a.size
    fb = np.searchsorted(b, pooled[:-1], side="right") / b.size
    return float(np.sum(np.abs(fa - fb) * widths))


def ks_critical_value(n: int, m: int, alpha: float = 0.01) -> float:
    """Asymptotic two-sample KS critical value at level ``alpha``."""
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c * math.sqrt((n + m) / (n * m))


def bootstrap_ci(samples, statistic=np.mean, level: float = 0.95, resamples: int = 1000,
                 seed: int = 0, vectorized: bool = True) -> tuple[float, float]:
    """Percentile bootstrap interval for ``statistic``.

    With ``vectorized=True`` the statistic must accept an ``axis`` keyword and
    is applied to blocks of resamples at once.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("cannot bootstrap an empty sample")
    if resamples < 100:
        raise ValueError("use at least 100 resamples")
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    rng = np.random.default_rng(seed)
    stats = np.empty(resamples)
    block = max(1, min(resamples, 2_000_000 // x.size))
    for start in range(0, resamples, block):
        k = min(block, resamples - start)
        idx = rng.integers(0, x.size, size=(k, x.size))
        if vectorized:
            stats[start:start + k] = statistic(x[idx], axis=1)
        else:
            stats[start:start + k] = [statistic(row) for row in x[idx]]
    alpha = 1.0 - level
    lo, hi = np.quantile(stats, [alpha / 2.0, 1.0 - alpha / 2.0])
    return float(lo), float(hi)
