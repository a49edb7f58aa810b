import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quenched_rwrs.local_time import bm_local_time, sup_local_time, walk_local_time
from quenched_rwrs.sampler import BrownianPath, WalkPath, replica_seed, simulate_bm, simulate_srw


def _counts(grid):
    return dict(zip(grid.sites.tolist(), grid.masses.tolist()))


def test_walk_hand_counts():
    c = _counts(walk_local_time(WalkPath(np.array([0, 1, 0, -1]))))
    assert c[1] == 1 and c[0] == 1 and c[-1] == 1
    c = _counts(walk_local_time(WalkPath(np.array([0, 1, 2, 1]))))
    assert c[1] == 2 and c[2] == 1 and c.get(0, 0) == 0


def test_empty_walk_grid():
    g = walk_local_time(WalkPath(np.array([0])))
    assert g.total_time() == 0.0


@given(st.integers(0, 3000), st.integers(0, 2**32))
def test_walk_occupation_identity(n, seed):
    g = walk_local_time(simulate_srw(n, seed))
    assert g.masses.sum() == n
    assert np.all(g.masses >= 0)


def test_frozen_path():
    p = BrownianPath(1.0, 1e-3, np.zeros(1001))
    g = bm_local_time(p, 0.02)
    assert sup_local_time(g) == pytest.approx(1 / 0.02)
    assert g.total_time() == pytest.approx(1.0)
    assert g.masses.size == 1 and g.edges[0] == 0.0


@given(st.integers(0, 2**32), st.sampled_from([0.005, 0.02, 0.1]))
def test_bm_total_time(seed, h):
    p = simulate_bm(1.0, 1e-3, seed)
    g = bm_local_time(p, h)
    assert abs(g.total_time() - 1.0) <= p.dt
    assert np.all(g.masses >= 0)
    # nonzero bins lie inside the path's range
    lo, hi = g.edges[0], g.edges[-1]
    assert lo <= p.values.min() + h and hi >= p.values.max() - h
    assert g.support_min <= g.support_max


def test_bm_rejects_bad_h():
    p = simulate_bm(1.0, 0.1, 0)
    with pytest.raises(ValueError):
        bm_local_time(p, 0.0)
    with pytest.raises(ValueError):
        bm_local_time(p, -0.1)


def test_sup_walk():
    assert sup_local_time(walk_local_time(WalkPath(np.array([0, 1, 0, -1])))) == 1


def test_sup_pigeonhole():
    g = bm_local_time(simulate_bm(1.0, 1e-4, 3), 0.02)
    width = g.masses.size * g.bin_width
    assert sup_local_time(g) >= g.total_time() / width


def test_mean_local_time_at_zero():
    # L_1(0) has the law of |N(0,1)|: mean sqrt(2/pi)
    h = 0.02
    vals = []
    for i in range(10_000):
        g = bm_local_time(simulate_bm(1.0, 1e-4, replica_seed(31, i)), h)
        # average of the two bins touching 0
        k = -g.origin_offset
        vals.append(0.5 * (g.masses[k - 1] + g.masses[k]))
    assert abs(np.mean(vals) - math.sqrt(2 / math.pi)) <= 0.02


def test_square_integral_refinement_monitored():
    p = simulate_bm(1.0, 1e-5, 8)
    a = bm_local_time(p, 0.02).square_integral()
    b = bm_local_time(p, 0.01).square_integral()
    assert abs(a - b) / a < 0.1
