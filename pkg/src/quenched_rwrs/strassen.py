"""Piecewise-linear members of the Strassen class and the LIL-rescaled scenery.

A :class:`StrassenFunction` is continuous, piecewise linear between its knots
and constant outside them, so its derivative is a compactly supported step
function and its Dirichlet energy is an exact finite sum.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .sampler import CONTINUUM, FieldKindError


@dataclass(frozen=True, eq=False)
class StrassenFunction:
    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        knots = np.atleast_1d(np.asarray(self.knots, dtype=float))
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if knots.ndim != 1 or knots.shape != values.shape or knots.size == 0:
            raise ValueError("knots and values must be equal-length 1-d sequences")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("knots must be strictly increasing")
        if not (np.all(np.isfinite(knots)) and np.all(np.isfinite(values))):
            raise ValueError("knots and values must be finite")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    @property
    def left_level(self) -> float:
        return float(self.values[0])

    @property
    def right_level(self) -> float:
        return float(self.values[-1])

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.knots)

    def __call__(self, x):
        return np.interp(x, self.knots, self.values)

    def derivative(self, x):
        """Step-function derivative, right-continuous: at a knot the slope of
        the segment to its right is used."""
        x = np.asarray(x, dtype=float)
        slopes = np.concatenate(([0.0], self.slopes, [0.0]))
        return slopes[np.searchsorted(self.knots, x, side="right")]

    def antiderivative(self, x):
        """``F(x) = int_0^x f(u) du``, exact for the piecewise-linear ``f``."""
        x = np.asarray(x, dtype=float)
        k, v = self.knots, self.values
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(k))))

        def primitive(y):
            # integral from knots[0] to y
            j = np.clip(np.searchsorted(k, y, side="right") - 1, 0, k.size - 1)
            fy = np.interp(y, k, v)
            return cum[j] + 0.5 * (v[j] + fy) * (y - k[j])

        return primitive(x) - primitive(0.0)

    def energy(self) -> float:
        return energy(self)

    def __neg__(self) -> "StrassenFunction":
        return StrassenFunction(self.knots, -self.values)

    def reflected(self) -> "StrassenFunction":
        """``x -> f(-x)``."""
        return StrassenFunction(-self.knots[::-1], self.values[::-1])

    def scaled(self, c: float) -> "StrassenFunction":
        return StrassenFunction(self.knots, c * self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["left_level", "right_level"])
        w.writerow([repr(self.left_level), repr(self.right_level)])
        w.writerow(["knot", "value"])
        for k, v in zip(self.knots, self.values):
            w.writerow([repr(float(k)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "StrassenFunction":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if rows[0] != ["left_level", "right_level"] or rows[2] != ["knot", "value"]:
            raise ValueError("not a StrassenFunction CSV")
        left, right = (float(v) for v in rows[1])
        data = np.array([[float(a), float(b)] for a, b in rows[3:]])
        f = cls(data[:, 0], data[:, 1])
        if f.left_level != left or f.right_level != right:
            raise ValueError("outside levels disagree with the end knots")
        return f


def energy(f: StrassenFunction) -> float:
    """Dirichlet energy ``sum slope_j^2 (x_{j+1} - x_j)``."""
    return float(np.sum(f.slopes**2 * np.diff(f.knots)))


def is_in_Kstar(f: StrassenFunction, tol: float = 0.0) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return abs(float(f(0.0))) <= 1e-12 and energy(f) <= 1.0 + tol


def restrict(f: StrassenFunction, s: float, r: float) -> StrassenFunction:
    """``f`` on ``[s, r]``, held constant outside."""
    if not s < r:
        raise ValueError("need s < r")
    inner = f.knots[(f.knots > s) & (f.knots < r)]
    knots = np.concatenate(([s], inner, [r]))
    return StrassenFunction(knots, f(knots))


def extend_constant(f: StrassenFunction, n: float | None = None) -> StrassenFunction:
    """Restrict ``f`` to ``[-n, n]`` and extend by its boundary values.

    With ``n=None`` the function is returned as is, since the piecewise-linear
    representation is already constant beyond its outermost knots.
    """
    if n is None:
        return StrassenFunction(f.knots, f.values)
    return restrict(f, -n, n)


def zero() -> StrassenFunction:
    return StrassenFunction([0.0], [0.0])


def tent_ramp() -> StrassenFunction:
    """``min(max(x, 0), 1)``: energy 1."""
    return StrassenFunction([0.0, 1.0], [0.0, 1.0])


def symmetric_hat() -> StrassenFunction:
    """Even double bump with peaks at +-1/2 and energy 1."""
    a = 1.0 / (2.0 * math.sqrt(2.0))
    return StrassenFunction([-1.0, -0.5, 0.0, 0.5, 1.0], [0.0, a, 0.0, a, 0.0])


def two_sided_ramp() -> StrassenFunction:
    """``clip(x, -1, 1) / 2``: energy 1/2."""
    return StrassenFunction([-1.0, 1.0], [-0.5, 0.5])


def dictionary() -> dict[str, StrassenFunction]:
    return {
        "zero": zero(),
        "tent_ramp": tent_ramp(),
        "neg_tent_ramp": -tent_ramp(),
        "symmetric_hat": symmetric_hat(),
        "two_sided_ramp": two_sided_ramp(),
    }


def lattice(s: float, r: float, spacing: float) -> np.ndarray:
    """Points ``k * spacing`` inside ``[s, r]``; always contains 0 when s <= 0 <= r."""
    lo = math.ceil(s / spacing - 1e-9)
    hi = math.floor(r / spacing + 1e-9)
    return np.arange(lo, hi + 1) * spacing


def dyadic_level_for(step: float, extra: int = 2) -> int:
    """Dyadic level whose node spacing is at most ``step / 2**extra``."""
    if step >= 1.0:
        return extra
    return min(40, math.ceil(-math.log2(step)) + extra)


@dataclass(frozen=True, eq=False)
class RescaledProfile:
    lam: float
    window: tuple[float, float]
    t: np.ndarray
    samples: np.ndarray
    spacing: float


E_E = math.exp(math.e)


def check_scale(lam: float) -> float:
    """Scales must exceed e^e so that ln ln of them is positive and the LIL normaliser is defined."""
    if not lam > E_E:
        raise ValueError(f"scale lambda must exceed e^e ~ 15.154, got {lam}")
    return float(lam)


def _check_continuum(field):
    if getattr(field, "kind", None) != CONTINUUM:
        raise FieldKindError("needs a continuum scenery")


def rescale_profile(field, lam: float, window=(-1.0, 1.0), spacing: float = 1 / 256,
                    level=None) -> RescaledProfile:
    """Sample ``W(lam t) / sqrt(2 lam ln ln lam)`` on a lattice over ``window``."""
    _check_continuum(field)
    s, r = window
    if not s < 0 < r:
        raise ValueError("window must satisfy s < 0 < r")
    check_scale(lam)
    if level is None:
        level = dyadic_level_for(lam * spacing)
    t = lattice(s, r, spacing)
    return RescaledProfile(float(lam), (float(s), float(r)), t,
                           field.rescaled(lam, t, level), float(spacing))


def sup_distance(profile: RescaledProfile, f: StrassenFunction) -> float:
    return float(np.max(np.abs(profile.samples - f(profile.t))))


def uniform_lil_statistic(field, lam: float, window=(-4.0, 4.0),
                          spacing: float = 1 / 128) -> float:
    """``max |W_lam(t)| / sqrt(|t| ln ln(|t| + 1/|t| + 36))`` over the lattice, t != 0."""
    _check_continuum(field)
    s, r = window
    t = lattice(s, r, spacing)
    t = t[t != 0.0]
    w = field.rescaled(lam, t, dyadic_level_for(lam * spacing))
    at = np.abs(t)
    return float(np.max(np.abs(w) / np.sqrt(at * np.log(np.log(at + 1.0 / at + 36.0)))))


def lil_statistic_over(field, lambdas, window=(-4.0, 4.0), spacing: float = 1 / 128) -> np.ndarray:
    return np.array([uniform_lil_statistic(field, lam, window, spacing) for lam in lambdas])


def geometric_grid(log_start: float, log_stop: float, log_ratio: float) -> np.ndarray:
    """``exp(log_start), exp(log_start + log_ratio), ...`` up to ``exp(log_stop)``."""
    count = int(math.floor((log_stop - log_start) / log_ratio + 1e-9)) + 1
    return np.exp(log_start + log_ratio * np.arange(count))
