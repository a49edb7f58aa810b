"""Monte Carlo checks of the second-moment and truncation bounds on ``int f dL_1``."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import ndtr

from .local_time import bm_local_time
from .sampler import replica_seed, simulate_bm
from .stats import bootstrap_ci
from .strassen import StrassenFunction
from .theta import DEFAULT_DT, DEFAULT_H, SceneryLattice, pairing, sample_occupation

BOOTSTRAP_RESAMPLES = 1000
CONFIDENCE = 0.99


def _gaussian_piece_moments(a: float, b: float, sigma: float):
    """``E[Y^k 1{a <= Y < b}]`` for ``Y ~ N(0, sigma^2)``, k = 0, 1, 2."""
    za, zb = a / sigma, b / sigma
    pa = 0.0 if math.isinf(za) else math.exp(-0.5 * za * za) / math.sqrt(2 * math.pi)
    pb = 0.0 if math.isinf(zb) else math.exp(-0.5 * zb * zb) / math.sqrt(2 * math.pi)
    m0 = float(ndtr(zb) - ndtr(za))
    m1 = sigma * (pa - pb)
    ta = 0.0 if math.isinf(za) else za * pa
    tb = 0.0 if math.isinf(zb) else zb * pb
    m2 = sigma * sigma * (m0 + ta - tb)
    return m0, m1, m2


def mean_square_at(f: StrassenFunction, u: float) -> float:
    """``E[f(B_u)^2]``, exact: f^2 is a quadratic on every piece."""
    if u == 0.0:
        return float(f(0.0)) ** 2
    sigma = math.sqrt(u)
    k, v = f.knots, f.values
    total = v[0] ** 2 * _gaussian_piece_moments(-math.inf, k[0], sigma)[0]
    total += v[-1] ** 2 * _gaussian_piece_moments(k[-1], math.inf, sigma)[0]
    for j, slope in enumerate(f.slopes):
        # f(y) = alpha + slope * y on [k_j, k_{j+1})
        alpha = v[j] - slope * k[j]
        m0, m1, m2 = _gaussian_piece_moments(k[j], k[j + 1], sigma)
        total += alpha * alpha * m0 + 2 * alpha * slope * m1 + slope * slope * m2
    return float(total)


def s_of_f(f: StrassenFunction, points: int = 101) -> float:
    """``sup_{0 <= u <= 1} E f^2(B_u)`` over an even grid of ``points`` times."""
    return max(mean_square_at(f, u) for u in np.linspace(0.0, 1.0, points))


@dataclass
class BoundReport:
    bound_name: str
    lhs_estimate: float
    lhs_ci: tuple[float, float]
    rhs_value: float
    satisfied: bool
    n_paths: int
    details: dict = field(default_factory=dict)
    samples: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("samples")
        d["lhs_ci"] = list(d["lhs_ci"])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _report(name, samples, rhs, n_paths, seed, details=None) -> BoundReport:
    samples = np.asarray(samples, dtype=float)
    # two-sided 98% interval: its upper end is the one-sided 99% bound
    lo, hi = bootstrap_ci(samples, np.mean, level=1 - 2 * (1 - CONFIDENCE),
                          resamples=BOOTSTRAP_RESAMPLES, seed=seed)
    return BoundReport(name, float(samples.mean()), (lo, hi), float(rhs), bool(hi <= rhs),
                       n_paths, details or {}, samples)


def _paths(n_paths, seed, dt):
    for i in range(n_paths):
        yield simulate_bm(1.0, dt, replica_seed(seed, i))


def check_second_moment(f: StrassenFunction, n_paths: int, seed: int,
                        dt: float = DEFAULT_DT) -> BoundReport:
    vals = np.array([sample_occupation(f, p) for p in _paths(n_paths, seed, dt)])
    s = s_of_f(f)
    return _report("second_moment", vals**2, 16.0 * s, n_paths, seed,
                   {"s_of_f": s, "seed": seed, "dt": dt})


def tail_integrals(f: StrassenFunction, radii, n_paths: int, seed: int,
                   dt: float = DEFAULT_DT, h: float = DEFAULT_H) -> np.ndarray:
    """``int f 1_{|x| > n} dL_1`` for each radius (columns) on each path (rows)."""
    radii = list(radii)
    out = np.empty((n_paths, len(radii)))
    for i, path in enumerate(_paths(n_paths, seed, dt)):
        grid = bm_local_time(path, h)
        fe = f(grid.edges)
        full = pairing(grid, fe)
        for j, n in enumerate(radii):
            out[i, j] = full - pairing(grid, fe, n)
    return out


def truncation_f_rhs(f: StrassenFunction, n: float, s: float | None = None) -> float:
    s = s_of_f(f) if s is None else s
    return 4.0 * math.sqrt(2.0 * s) * math.exp(-n * n / 4.0)


def check_truncation_f(f: StrassenFunction, n: float, n_paths: int, seed: int,
                       dt: float = DEFAULT_DT, h: float = DEFAULT_H,
                       tails: np.ndarray | None = None) -> BoundReport:
    if n < 0:
        raise ValueError("truncation radius must be nonnegative")
    if tails is None:
        tails = tail_integrals(f, [n], n_paths, seed, dt, h)[:, 0]
    s = s_of_f(f)
    return _report("truncation_f", np.abs(tails), truncation_f_rhs(f, n, s), len(tails), seed,
                   {"n": n, "s_of_f": s, "seed": seed, "dt": dt, "h": h})


def h_truncation_gaps(field, lam: float, radii, n_paths: int, seed: int,
                      dt: float = DEFAULT_DT, h: float = DEFAULT_H) -> np.ndarray:
    """``|H_lam - H_lam^{(n)}|`` per path (rows) and radius (columns)."""
    radii = list(radii)
    lattice = SceneryLattice(field, lam, h)
    out = np.empty((n_paths, len(radii)))
    for i, path in enumerate(_paths(n_paths, seed, dt)):
        grid = bm_local_time(path, h)
        g = lattice.at(grid.edge_index)
        full = pairing(grid, g)
        out[i] = [abs(full - pairing(grid, g, n)) for n in radii]
    return out


def calibrate_truncation_constant(field, lam: float, radii, n_paths: int, seed: int,
                                  a_w: float, safety: float = 2.0, dt: float = DEFAULT_DT,
                                  h: float = DEFAULT_H) -> float:
    """Pilot-run estimate of the unnamed constant in ``E|H - H^(n)| <= c e^{-n^2/4} A_W``.

    Takes the largest ratio ``lhs_n e^{n^2/4} / A_W`` seen over ``radii`` and
    multiplies it by ``safety``; the pilot must use a seed disjoint from the
    checked run.
    """
    gaps = h_truncation_gaps(field, lam, radii, n_paths, seed, dt, h).mean(axis=0)
    ratios = [g * math.exp(n * n / 4.0) / a_w for g, n in zip(gaps, radii)]
    return safety * max(ratios)


def check_truncation_H(field, lam: float, n: float, n_paths: int, seed: int, c_hat: float,
                       a_w: float, dt: float = DEFAULT_DT, h: float = DEFAULT_H,
                       gaps: np.ndarray | None = None) -> BoundReport:
    if gaps is None:
        gaps = h_truncation_gaps(field, lam, [n], n_paths, seed, dt, h)[:, 0]
    rhs = c_hat * math.exp(-n * n / 4.0) * a_w
    return _report("truncation_H", gaps, rhs, len(gaps), seed,
                   {"n": n, "lambda": lam, "c_hat": c_hat, "A_W": a_w, "seed": seed,
                    "dt": dt, "h": h})
