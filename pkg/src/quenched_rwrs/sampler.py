"""Walks, Brownian paths and reproducible quenched sceneries.

Walk and Brownian-path randomness comes from numpy generators seeded by a
single integer. Scenery values are a keyed pseudo-random function of
``(seed, site)`` so one fixed scenery can be queried over unbounded ranges
and at any dyadic resolution without storing it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.special import ndtri

from ._philox import keyed_uniform

DISCRETE = "discrete_scenery"
CONTINUUM = "continuum_scenery"
SCENERY_LAWS = ("gaussian", "rademacher", "centered_exponentialized")

# Philox stream tags; midpoints of dyadic level l use _MIDPOINT + l.
_SITE = 0
_RIGHT = 1
_LEFT = 2
_MIDPOINT = 16
MAX_LEVEL = 40


class FieldKindError(ValueError):
    """A discrete-scenery operation got a continuum field or vice versa."""


def replica_seed(seed: int, replica: int) -> int:
    """64-bit seed for replica ``replica`` of a run seeded by ``seed``.

    Derived with :class:`numpy.random.SeedSequence` spawn keys, so the stream
    of a replica does not depend on how many replicas run or in what order.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replica),))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def replica_seeds(seed: int, count: int, start: int = 0) -> list[int]:
    return [replica_seed(seed, i) for i in range(start, start + count)]


@dataclass(frozen=True, eq=False)
class WalkPath:
    positions: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.int64)
        if pos.ndim != 1 or pos.size == 0 or pos[0] != 0:
            raise ValueError("walk positions must be a 1-d sequence starting at 0")
        if pos.size > 1 and not np.all(np.abs(np.diff(pos)) == 1):
            raise ValueError("walk increments must be +1 or -1")
        object.__setattr__(self, "positions", pos)

    @property
    def steps_count(self) -> int:
        return self.positions.size - 1


@dataclass(frozen=True, eq=False)
class BrownianPath:
    horizon: float
    dt: float
    values: np.ndarray
    seed: int | None = None

    @property
    def steps(self) -> int:
        return self.values.size - 1

    def reflected(self) -> "BrownianPath":
        return BrownianPath(self.horizon, self.dt, -self.values, self.seed)


def step_count(T: float, dt: float) -> int:
    # guard against T/dt landing a hair below an integer (1/1e-4 and friends)
    return int(math.floor(T / dt + 1e-9))


def simulate_srw(n: int, seed: int) -> WalkPath:
    """Simple symmetric random walk with ``n`` steps."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    steps = 2 * rng.integers(0, 2, size=n, dtype=np.int64) - 1
    positions = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(steps, out=positions[1:])
    return WalkPath(positions, seed)


def simulate_bm(T: float, dt: float, seed: int) -> BrownianPath:
    """Brownian motion on ``[0, T]`` from Gaussian increments of variance ``dt``."""
    if not T > 0:
        raise ValueError("horizon T must be positive")
    if not 0 < dt <= T:
        raise ValueError("dt must satisfy 0 < dt <= T")
    n = step_count(T, dt)
    rng = np.random.default_rng(seed)
    values = np.empty(n + 1)
    values[0] = 0.0
    np.cumsum(rng.standard_normal(n) * math.sqrt(dt), out=values[1:])
    return BrownianPath(float(T), float(dt), values, seed)


def _law_transform(u: np.ndarray, law: str) -> np.ndarray:
    if law == "gaussian":
        return ndtri(u)
    if law == "rademacher":
        return np.where(u < 0.5, -1.0, 1.0)
    if law == "centered_exponentialized":
        # Exp(1) - 1: mean 0, variance 1, all moments finite, skewed tails
        return -np.log1p(-u) - 1.0
    raise ValueError(f"unknown scenery law {law!r}")


class ContinuumField:
    """Base for two-sided continuum sceneries ``x -> W(x)``.

    Subclasses provide :meth:`values`; :meth:`rescaled` is the LIL rescaling
    ``W(lam * t) / sqrt(2 lam ln ln lam)`` and may be overridden by test
    doubles that need a profile independent of ``lam``.
    """

    kind = CONTINUUM
    resolution = 12

    def values(self, x, level=None) -> np.ndarray:
        raise NotImplementedError

    def rescaled(self, lam: float, t, level=None) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.values(lam * t, level) / lil_norm(lam)


class DiscreteField:
    """Base for discrete sceneries ``x -> xi_x`` on the integers."""

    kind = DISCRETE

    def site_values(self, sites) -> np.ndarray:
        raise NotImplementedError


def lil_norm(lam: float) -> float:
    """``sqrt(2 lam ln ln lam)``, the normaliser of the scenery at scale ``lam``."""
    if not lam > math.e:
        raise ValueError(f"scale must exceed e for ln ln to be positive, got {lam}")
    return math.sqrt(2.0 * lam * math.log(math.log(lam)))


@dataclass(frozen=True, eq=False)
class QuenchedField(ContinuumField, DiscreteField):
    """A scenery that is a deterministic function of ``seed``.

    ``kind`` selects between the discrete i.i.d. scenery (``xi_x``) and the
    two-sided Brownian scenery built by Levy midpoint refinement over an
    integer skeleton. ``resolution`` is the default dyadic level.
    """

    seed: int
    kind: str = DISCRETE
    scenery_law: str = "gaussian"
    resolution: int = 12
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in (DISCRETE, CONTINUUM):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.scenery_law not in SCENERY_LAWS:
            raise ValueError(f"unknown scenery law {self.scenery_law!r}")
        if not 0 <= self.resolution <= MAX_LEVEL:
            raise ValueError("resolution must be a dyadic level in [0, 40]")

    def _require(self, kind):
        if self.kind != kind:
            raise FieldKindError(f"operation needs a {kind} field, got {self.kind}")

    def site_values(self, sites) -> np.ndarray:
        self._require(DISCRETE)
        u = keyed_uniform(self.seed, sites, _SITE)
        return _law_transform(u, self.scenery_law)

    def _skeleton(self, side: int, upto: int) -> np.ndarray:
        """W at 0, 1, ..., upto on one side (side=+1 right, -1 left)."""
        key = "right" if side > 0 else "left"
        cum = self._cache.get(key)
        if cum is None or cum.size <= upto:
            size = max(upto + 1, 64, 0 if cum is None else 2 * cum.size)
            stream = _RIGHT if side > 0 else _LEFT
            g = ndtri(keyed_uniform(self.seed, np.arange(size - 1), stream))
            cum = np.zeros(size)
            # cumsum is sequential, so prefixes are identical for any size
            np.cumsum(g, out=cum[1:])
            self._cache[key] = cum
        return cum

    def _integer_values(self, k: np.ndarray) -> np.ndarray:
        out = np.zeros(k.shape)
        pos = k > 0
        neg = k < 0
        if pos.any():
            out[pos] = self._skeleton(1, int(k[pos].max()))[k[pos]]
        if neg.any():
            out[neg] = self._skeleton(-1, int(-k[neg].min()))[-k[neg]]
        return out

    def values(self, x, level=None) -> np.ndarray:
        """Two-sided Brownian scenery at real points ``x``.

        Values at dyadic points of level <= ``level`` are exact node values;
        between nodes the field is linearly interpolated.
        """
        self._require(CONTINUUM)
        level = self.resolution if level is None else int(level)
        if not 0 <= level <= MAX_LEVEL:
            raise ValueError("level must be in [0, 40]")
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        j = np.floor(flat).astype(np.int64)
        left = self._integer_values(j)
        right = self._integer_values(j + 1)
        for lev in range(1, level + 1):
            mid_index = 2 * j + 1
            g = ndtri(keyed_uniform(self.seed, mid_index, _MIDPOINT + lev))
            mid = 0.5 * (left + right) + 2.0 ** (-(lev + 1) / 2) * g
            upper = flat >= mid_index * 2.0**-lev
            left = np.where(upper, mid, left)
            right = np.where(upper, right, mid)
            j = np.where(upper, mid_index, 2 * j)
        frac = (flat - j * 2.0**-level) * 2.0**level
        return (left + frac * (right - left)).reshape(x.shape)


class FunctionField(ContinuumField):
    """Continuum scenery given by a deterministic function (test doubles)."""

    def __init__(self, fn, resolution: int = 12):
        self.fn = fn
        self.resolution = resolution

    def values(self, x, level=None) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.fn(x), dtype=float), x.shape).copy()


class FrozenProfileField(ContinuumField):
    """Continuum field whose rescaled profile is the same at every scale."""

    def __init__(self, profile):
        self.profile = profile

    def values(self, x, level=None) -> np.ndarray:
        raise NotImplementedError("a frozen profile only exists after rescaling")

    def rescaled(self, lam, t, level=None) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self.profile(t), dtype=float), t.shape).copy()


class TableScenery(DiscreteField):
    """Discrete scenery from a mapping or a callable, default 0 off the table."""

    def __init__(self, table=None, default: float = 0.0):
        self.table = table if table is not None else {}
        self.default = default

    def site_values(self, sites) -> np.ndarray:
        sites = np.asarray(sites, dtype=np.int64)
        if callable(self.table):
            return np.asarray(self.table(sites), dtype=float) * np.ones(sites.shape)
        return np.array([self.table.get(int(s), self.default) for s in sites.ravel()],
                        dtype=float).reshape(sites.shape)


def field_site_value(field, x):
    """Scenery value ``xi_x`` at integer site(s) ``x``."""
    if getattr(field, "kind", None) != DISCRETE:
        raise FieldKindError("field_site_value needs a discrete scenery")
    out = field.site_values(np.asarray(x, dtype=np.int64))
    return float(out) if np.ndim(out) == 0 else out


def field_continuum_value(field, x, level=None):
    """Two-sided Brownian scenery ``W(x)`` at dyadic depth ``level``."""
    if getattr(field, "kind", None) != CONTINUUM:
        raise FieldKindError("field_continuum_value needs a continuum scenery")
    out = field.values(np.asarray(x, dtype=float), level)
    return float(out) if np.ndim(out) == 0 else out
