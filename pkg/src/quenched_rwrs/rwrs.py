"""Random walk in random scenery ``K_n``, Brownian motion in Brownian scenery ``Z_t``, and their LIL rescaling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .local_time import LocalTimeGrid, walk_local_time
from .sampler import CONTINUUM, DISCRETE, FieldKindError, WalkPath

E_E = math.exp(math.e)


def _check_kind(field, kind):
    if getattr(field, "kind", None) != kind:
        raise FieldKindError(f"expected a {kind} field")


def compute_K(path: WalkPath, field, method: str = "local_time") -> float:
    """``K_n = sum_{i=1}^n xi_{S_i}``.

    ``method="direct"`` sums along the path; ``"local_time"`` evaluates
    ``sum_x xi_x l_n(x)`` and only touches the visited sites.
    """
    _check_kind(field, DISCRETE)
    if path.steps_count == 0:
        return 0.0
    if method == "direct":
        return float(np.sum(field.site_values(path.positions[1:])))
    if method == "local_time":
        grid = walk_local_time(path)
        return float(np.dot(field.site_values(grid.sites), grid.masses))
    raise ValueError(f"unknown method {method!r}")


def compute_Z(local_time: LocalTimeGrid, field, level=None) -> float:
    """Stieltjes sum ``sum_k L(x_k) (W(x_{k+1}) - W(x_k))`` over the grid bins."""
    _check_kind(field, CONTINUUM)
    w = field.values(local_time.edges, level)
    return float(np.dot(local_time.masses, np.diff(w)))


def lil_denominator(time: float) -> float:
    """``sqrt(2 time^{3/2} ln ln time)``, defined for ``time > e^e``."""
    if not time > E_E:
        raise ValueError(f"time must exceed e^e ~ 15.154, got {time}")
    return math.sqrt(2.0 * time**1.5 * math.log(math.log(time)))


@dataclass(frozen=True)
class RescaledValue:
    raw: float
    time: float
    scaled: float


def rescale(raw: float, time: float) -> RescaledValue:
    return RescaledValue(float(raw), float(time), raw / lil_denominator(time))


def unscale(value: RescaledValue) -> float:
    return value.scaled * lil_denominator(value.time)
