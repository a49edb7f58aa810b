"""Local-time profiles of walks (exact visit counts) and Brownian paths (binned occupation)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sampler import BrownianPath, WalkPath


@dataclass(frozen=True, eq=False)
class LocalTimeGrid:
    """Piecewise-constant local-time profile.

    Bin ``k`` covers ``[(origin_offset + k) h, (origin_offset + k + 1) h)`` and
    ``masses[k]`` is occupation time in the bin divided by ``h``. For walks
    ``h = 1`` and bin ``k`` is the site ``origin_offset + k``.
    """

    bin_width: float
    origin_offset: int
    masses: np.ndarray
    support_min: float
    support_max: float

    @property
    def edge_index(self) -> np.ndarray:
        """Integer labels of the ``len(masses) + 1`` bin edges."""
        return self.origin_offset + np.arange(self.masses.size + 1)

    @property
    def edges(self) -> np.ndarray:
        return self.edge_index * self.bin_width

    @property
    def sites(self) -> np.ndarray:
        return self.origin_offset + np.arange(self.masses.size)

    def total_time(self) -> float:
        return float(self.masses.sum() * self.bin_width)

    def square_integral(self) -> float:
        """``int L(x)^2 dx`` of the binned profile."""
        return float(np.dot(self.masses, self.masses) * self.bin_width)


def walk_local_time(path: WalkPath) -> LocalTimeGrid:
    """Visit counts ``#{1 <= i <= n : S_i = x}``; ``S_0`` is not counted."""
    pos = path.positions
    if pos.size == 1:
        return LocalTimeGrid(1.0, 0, np.zeros(1), 0.0, 0.0)
    visited = pos[1:]
    lo = int(visited.min())
    counts = np.bincount(visited - lo).astype(float)
    return LocalTimeGrid(1.0, lo, counts, float(lo), float(visited.max()))


def bm_local_time(path: BrownianPath, h: float) -> LocalTimeGrid:
    """Occupation-density estimate of the local time at the path's horizon.

    Each step ``[t_k, t_k + dt)`` is credited to the bin holding ``B(t_k)``.
    """
    if not h > 0:
        raise ValueError("bin width h must be positive")
    left = path.values[:-1]
    if left.size == 0:
        return LocalTimeGrid(float(h), 0, np.zeros(1), 0.0, 0.0)
    bins = np.floor(left / h).astype(np.int64)
    lo = int(bins.min())
    masses = np.bincount(bins - lo) * (path.dt / h)
    return LocalTimeGrid(float(h), lo, masses, float(left.min()), float(left.max()))


def sup_local_time(grid: LocalTimeGrid) -> float:
    return float(grid.masses.max())
