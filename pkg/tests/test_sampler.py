import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quenched_rwrs.sampler import (CONTINUUM, DISCRETE, SCENERY_LAWS, BrownianPath,
                                   FieldKindError, QuenchedField, WalkPath, field_continuum_value,
                                   field_site_value, lil_norm, replica_seed, replica_seeds,
                                   simulate_bm, simulate_srw, step_count)


def test_empty_walk():
    assert simulate_srw(0, 5).positions.tolist() == [0]


def test_walk_increments_are_unit():
    p = simulate_srw(1000, 3)
    assert p.steps_count == 1000
    assert set(np.diff(p.positions).tolist()) <= {-1, 1}
    assert p.positions[0] == 0


def test_walk_rejects_negative_n():
    with pytest.raises(ValueError):
        simulate_srw(-1, 0)


def test_walkpath_validation():
    with pytest.raises(ValueError):
        WalkPath(np.array([0, 2]))
    with pytest.raises(ValueError):
        WalkPath(np.array([1, 2]))


def test_walk_endpoint_mean_clt():
    # S_100 over 1e5 seeds: mean 0, sd of the sample mean 10 / sqrt(1e5)
    ends = np.array([simulate_srw(100, replica_seed(11, i)).positions[-1] for i in range(100_000)])
    assert abs(ends.mean()) <= 3 * 10 / math.sqrt(1e5)


def test_walk_increment_mean():
    steps = np.diff(simulate_srw(200_000, 8).positions)
    assert abs(steps.mean()) <= 4 / math.sqrt(steps.size)


def test_bm_single_step():
    p = simulate_bm(1.0, 1.0, 4)
    assert p.values.size == 2 and p.values[0] == 0.0
    g = np.random.default_rng(4).standard_normal(1)[0]
    assert p.values[1] == g


def test_bm_length_and_start():
    p = simulate_bm(1.0, 1e-4, 0)
    assert p.values.size == 10_001 and p.values[0] == 0.0
    assert step_count(2.0, 0.3) == 6


@pytest.mark.parametrize("T,dt", [(0.0, 0.1), (-1.0, 0.1), (1.0, 0.0), (1.0, -0.1), (1.0, 2.0)])
def test_bm_rejects_bad_inputs(T, dt):
    with pytest.raises(ValueError):
        simulate_bm(T, dt, 0)


def test_bm_terminal_variance_chi_square():
    vals = np.array([simulate_bm(1.0, 0.01, replica_seed(2, i)).values[-1] for i in range(10_000)])
    # sample variance of 1e4 standard normals has sd sqrt(2 / 1e4) ~ 0.014
    assert abs(vals.var(ddof=1) - 1.0) <= 0.05


def test_bm_reflected():
    p = simulate_bm(1.0, 0.1, 1)
    assert np.array_equal(p.reflected().values, -p.values)


def test_replica_seeds_independent_of_count():
    assert replica_seeds(5, 10)[3:6] == replica_seeds(5, 3, start=3)
    assert len(set(replica_seeds(5, 1000))) == 1000


@given(st.integers(0, 2**63 - 1), st.integers(-10**9, 10**9))
def test_site_value_deterministic(seed, x):
    f = QuenchedField(seed)
    assert field_site_value(f, x) == field_site_value(QuenchedField(seed), x)


def test_rademacher_support():
    v = QuenchedField(3, DISCRETE, "rademacher").site_values(np.arange(-1000, 1000))
    assert set(np.unique(v).tolist()) == {-1.0, 1.0}


@pytest.mark.parametrize("law", SCENERY_LAWS)
def test_site_variance_clt(law):
    v = QuenchedField(12, DISCRETE, law).site_values(np.arange(-100_000, 100_001))
    assert abs(v.mean()) <= 4 / math.sqrt(v.size) * 1.0
    assert abs(v.var() - 1.0) <= 0.02


def test_disjoint_windows_agree():
    f = QuenchedField(4, DISCRETE, "centered_exponentialized")
    a = f.site_values(np.arange(0, 50_000))
    b = f.site_values(np.arange(-50_000, 0))
    assert abs(a.mean() - b.mean()) <= 4 * math.sqrt(2 / 50_000)
    # Exp(1) - 1 has fourth central moment 9, so var(sample var) ~ 8 / n
    assert abs(a.var() - b.var()) <= 4 * math.sqrt(2 * 8 / 50_000)


def test_kind_errors():
    with pytest.raises(FieldKindError):
        field_site_value(QuenchedField(1, CONTINUUM), 0)
    with pytest.raises(FieldKindError):
        field_continuum_value(QuenchedField(1, DISCRETE), 0.5)
    with pytest.raises(ValueError):
        QuenchedField(1, "lattice")
    with pytest.raises(ValueError):
        QuenchedField(1, DISCRETE, "cauchy")


def test_continuum_origin_is_zero():
    f = QuenchedField(9, CONTINUUM)
    assert field_continuum_value(f, 0.0) == 0.0
    assert field_continuum_value(f, 0.0, 20) == 0.0


@given(st.integers(0, 2**32), st.integers(0, 14), st.integers(-2**12, 2**12))
def test_midpoint_consistency(seed, level, k):
    # a dyadic point of level `level` keeps its value at every finer level
    f = QuenchedField(seed, CONTINUUM)
    x = k * 2.0**-level
    v = f.values(x, level)
    assert f.values(x, level + 1) == v
    assert f.values(x, level + 5) == v


def test_continuum_cache_does_not_change_values():
    a = QuenchedField(77, CONTINUUM)
    b = QuenchedField(77, CONTINUUM)
    x = np.linspace(-3, 3, 101)
    near = a.values(x)
    a.values(np.array([5000.0, -7000.0]))  # force skeleton growth
    assert np.array_equal(a.values(x), near)
    assert np.array_equal(b.values(x), near)


def test_continuum_increment_law():
    # W(2) - W(1) and W(1) - W(0) over 1e4 seeds: unit variance, uncorrelated
    w = np.array([QuenchedField(replica_seed(3, i), CONTINUUM).values(np.array([1.0, 2.0, -1.0]), 6)
                  for i in range(10_000)])
    inc1, inc2, inc_left = w[:, 0], w[:, 1] - w[:, 0], w[:, 2]
    assert abs(inc2.var(ddof=1) - 1.0) <= 0.05
    assert abs(np.corrcoef(inc1, inc2)[0, 1]) <= 0.03
    assert abs(np.corrcoef(inc1, inc_left)[0, 1]) <= 0.03


def test_continuum_half_step_variance():
    w = np.array([QuenchedField(replica_seed(5, i), CONTINUUM).values(np.array([0.25, 0.5]), 4)
                  for i in range(10_000)])
    assert abs(w[:, 0].var() - 0.25) <= 0.25 * 0.05
    assert abs((w[:, 1] - w[:, 0]).var() - 0.25) <= 0.25 * 0.05


def test_lil_norm():
    assert lil_norm(100.0) == pytest.approx(math.sqrt(200 * math.log(math.log(100))))
    with pytest.raises(ValueError):
        lil_norm(2.0)


def test_brownian_path_steps():
    assert BrownianPath(1.0, 0.5, np.zeros(3)).steps == 2
