"""Samples of ``int f dL_1`` and of the scenery pairing ``H_lam = int W_lam dL_1``.

Three estimators of ``int f dL_1`` are kept independent of one another:

* occupation: ``-int_0^1 f'(B_s) ds`` as a left Riemann sum over the path,
* Stieltjes: ``-int L_1(x) df(x)`` against the binned local time,
* Ito: ``2 (-F(B_1) + int_0^1 f(B_u) dB_u)`` with ``F`` the exact primitive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .local_time import LocalTimeGrid, bm_local_time, sup_local_time
from .sampler import BrownianPath, CONTINUUM, FieldKindError, replica_seed, simulate_bm
from .stats import EmpiricalDistribution
from .strassen import StrassenFunction, check_scale, dyadic_level_for

DEFAULT_DT = 1e-4
DEFAULT_H = 0.02


def sample_occupation(f: StrassenFunction, path: BrownianPath) -> float:
    return -float(np.sum(f.derivative(path.values[:-1]))) * path.dt


def sample_stieltjes(f: StrassenFunction, grid: LocalTimeGrid) -> float:
    # bin average of f' is (f(right edge) - f(left edge)) / h, exact for
    # piecewise-linear f even when a knot falls inside a bin
    return -float(np.dot(grid.masses, np.diff(f(grid.edges))))


def sample_ito(f: StrassenFunction, path: BrownianPath) -> float:
    # a constant part telescopes to zero exactly, so drop f(0) before summing
    g = StrassenFunction(f.knots, f.values - float(f(0.0)))
    b = path.values
    ito_sum = float(np.dot(g(b[:-1]), np.diff(b)))
    return 2.0 * (ito_sum - float(g.antiderivative(b[-1])))


@dataclass(frozen=True)
class ThetaSample:
    value_occupation: float
    value_stieltjes: float
    value_ito: float
    path_id: int | None
    sup_local_time: float

    def discrepancies(self) -> tuple[float, float, float]:
        """|occ - stieltjes|, |occ - ito|, |stieltjes - ito|."""
        o, s, i = self.value_occupation, self.value_stieltjes, self.value_ito
        return abs(o - s), abs(o - i), abs(s - i)


def theta_sample(f: StrassenFunction, path: BrownianPath, h: float = DEFAULT_H) -> ThetaSample:
    grid = bm_local_time(path, h)
    return ThetaSample(sample_occupation(f, path), sample_stieltjes(f, grid),
                       sample_ito(f, path), path.seed, sup_local_time(grid))


def theta_samples(f: StrassenFunction, n_paths: int, seed: int, dt: float = DEFAULT_DT,
                  h: float = DEFAULT_H) -> list[ThetaSample]:
    out = []
    for i in range(n_paths):
        path = simulate_bm(1.0, dt, replica_seed(seed, i))
        out.append(theta_sample(f, path, h))
    return out


def theta_law(f: StrassenFunction, n_paths: int, seed: int, dt: float = DEFAULT_DT,
              reflect_paths: bool = False) -> EmpiricalDistribution:
    """Law of ``int f dL_1`` over ``n_paths`` independent paths (occupation channel)."""
    if n_paths < 1:
        raise ValueError("n_paths must be at least 1")
    vals = np.empty(n_paths)
    for i in range(n_paths):
        path = simulate_bm(1.0, dt, replica_seed(seed, i))
        if reflect_paths:
            path = path.reflected()
        vals[i] = sample_occupation(f, path)
    return EmpiricalDistribution(vals, {"experiment": "theta_law", "seed": seed,
                                        "n_paths": n_paths, "dt": dt})


def theta_rows_csv(samples) -> str:
    lines = ["path_seed,occ,stielt,ito"]
    for s in samples:
        lines.append(f"{s.path_id},{s.value_occupation!r},{s.value_stieltjes!r},{s.value_ito!r}")
    return "\n".join(lines) + "\n"


class SceneryLattice:
    """``W_lam`` on the bin-edge lattice ``k h``, materialised once per scale.

    Many paths are paired with the same rescaled scenery, so values are
    computed for a symmetric block of edges and extended on demand.
    """

    def __init__(self, field, lam: float, h: float = DEFAULT_H, radius: float = 6.0):
        if getattr(field, "kind", None) != CONTINUUM:
            raise FieldKindError("needs a continuum scenery")
        self.field = field
        self.lam = float(lam)
        self.h = float(h)
        self.level = dyadic_level_for(lam * h)
        self._k0 = 0
        self._vals = np.zeros(0)
        self._ensure(-int(math.ceil(radius / h)), int(math.ceil(radius / h)))

    def _ensure(self, kmin: int, kmax: int):
        if self._vals.size and self._k0 <= kmin and kmax < self._k0 + self._vals.size:
            return
        if self._vals.size:
            kmin = min(kmin, self._k0)
            kmax = max(kmax, self._k0 + self._vals.size - 1)
            span = kmax - kmin
            kmin, kmax = kmin - span // 2, kmax + span // 2
        k = np.arange(kmin, kmax + 1)
        self._vals = self.field.rescaled(self.lam, k * self.h, self.level)
        self._k0 = kmin

    def at(self, edge_index: np.ndarray) -> np.ndarray:
        self._ensure(int(edge_index[0]), int(edge_index[-1]))
        return self._vals[edge_index - self._k0]


def _grid_for(path_or_grid, h):
    if isinstance(path_or_grid, LocalTimeGrid):
        return path_or_grid
    return bm_local_time(path_or_grid, h)


def pairing(grid: LocalTimeGrid, edge_values: np.ndarray, n: float = math.inf) -> float:
    """``int g 1_{|x|<=n} dL`` from ``g`` on the grid edges, by summation by parts."""
    g = edge_values
    if math.isfinite(n):
        inside = np.abs(grid.edge_index) * grid.bin_width <= n + 1e-9
        g = np.where(inside, g, 0.0)
    return -float(np.dot(grid.masses, np.diff(g)))


def h_lambda(field, lam: float, path, n: float = math.inf, h: float = DEFAULT_H,
             lattice: SceneryLattice | None = None) -> float:
    """``H_lam^{(n)} = int_{-n}^{n} W_lam dL_1``; ``n = inf`` gives ``H_lam``.

    ``path`` may be a Brownian path or a precomputed local-time grid.
    """
    check_scale(lam)
    grid = _grid_for(path, h)
    if lattice is None:
        lattice = SceneryLattice(field, lam, grid.bin_width, radius=1.0)
    return pairing(grid, lattice.at(grid.edge_index), n)


@dataclass(frozen=True, eq=False)
class PairedRun:
    """Per-path values for ``H_lam``, its truncation and ``int f dL_1`` on shared paths."""

    h_full: np.ndarray
    h_truncated: np.ndarray
    theta: np.ndarray
    truncation: float

    @property
    def l1_distance(self) -> float:
        return float(np.mean(np.abs(self.h_full - self.theta)))

    @property
    def l1_standard_error(self) -> float:
        d = np.abs(self.h_full - self.theta)
        return float(d.std(ddof=1) / math.sqrt(d.size)) if d.size > 1 else 0.0

    @property
    def truncation_l1(self) -> float:
        return float(np.mean(np.abs(self.h_full - self.h_truncated)))


def paired_run(field, lam: float, f: StrassenFunction, n_paths: int, seed: int,
               truncation: float = 1.0, dt: float = DEFAULT_DT, h: float = DEFAULT_H) -> PairedRun:
    lattice = SceneryLattice(field, lam, h)
    hf, ht, th = np.empty(n_paths), np.empty(n_paths), np.empty(n_paths)
    for i in range(n_paths):
        path = simulate_bm(1.0, dt, replica_seed(seed, i))
        grid = bm_local_time(path, h)
        g = lattice.at(grid.edge_index)
        hf[i] = pairing(grid, g)
        ht[i] = pairing(grid, g, truncation)
        th[i] = sample_occupation(f, path)
    return PairedRun(hf, ht, th, truncation)


def l1_distance_on_common_paths(field, lam: float, f: StrassenFunction, n_paths: int,
                                seed: int, dt: float = DEFAULT_DT, h: float = DEFAULT_H) -> float:
    """Mean of ``|H_lam - int f dL_1|`` over shared paths, estimating ``E_B |H_lam - int f dL_1|``."""
    return paired_run(field, lam, f, n_paths, seed, dt=dt, h=h).l1_distance
