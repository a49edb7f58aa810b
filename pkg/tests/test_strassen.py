import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy.integrate import trapezoid

from quenched_rwrs import strassen
from quenched_rwrs.sampler import CONTINUUM, FieldKindError, FunctionField, QuenchedField, replica_seed
from quenched_rwrs.strassen import (StrassenFunction, dyadic_level_for, energy, extend_constant,
                                    geometric_grid, is_in_Kstar, lattice, rescale_profile, restrict,
                                    sup_distance, uniform_lil_statistic)

clipped_identity = StrassenFunction([-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0])


@st.composite
def pl_functions(draw):
    # knots on a 1/16 lattice in [-3, 3], always including 0 with value 0
    ticks = draw(st.sets(st.integers(-48, 48), min_size=1, max_size=8)) | {0}
    xs = [k / 16 for k in sorted(ticks)]
    ys = draw(st.lists(st.floats(-2, 2, allow_nan=False), min_size=len(xs), max_size=len(xs)))
    ys[xs.index(0.0)] = 0.0
    return StrassenFunction(xs, ys)


def test_energy_examples():
    assert energy(strassen.zero()) == 0.0
    assert energy(strassen.tent_ramp()) == 1.0
    assert energy(clipped_identity) == 2.0


def test_dictionary_energies(dictionary):
    assert set(dictionary) == {"zero", "tent_ramp", "neg_tent_ramp", "symmetric_hat",
                               "two_sided_ramp"}
    assert energy(dictionary["symmetric_hat"]) == pytest.approx(1.0)
    assert energy(dictionary["two_sided_ramp"]) == pytest.approx(0.5)
    for f in dictionary.values():
        assert is_in_Kstar(f, 1e-12)


def test_membership():
    assert is_in_Kstar(strassen.zero(), 0.0)
    assert is_in_Kstar(strassen.tent_ramp(), 0.0)
    assert not is_in_Kstar(clipped_identity, 0.0)
    assert not is_in_Kstar(StrassenFunction([0.0, 1.0], [0.1, 0.2]), 0.0)
    with pytest.raises(ValueError):
        is_in_Kstar(strassen.zero(), -1.0)


def test_evaluation_and_derivative():
    f = strassen.tent_ramp()
    assert f(np.array([-1, 0, 0.5, 1, 5])).tolist() == [0, 0, 0.5, 1, 1]
    # right-continuous derivative: slope of the segment to the right at a knot
    assert f.derivative(np.array([-0.1, 0.0, 0.5, 1.0])).tolist() == [0, 1, 1, 0]


@given(pl_functions(), st.floats(-5, 5))
def test_antiderivative_matches_quadrature(f, x):
    grid = np.linspace(0.0, x, 20001)
    approx = trapezoid(f(grid), grid)
    assert float(f.antiderivative(x)) == pytest.approx(approx, abs=1e-4 * (1 + abs(x)))


@given(pl_functions(), st.floats(0.01, 0.99))
def test_energy_refinement_invariant(f, frac):
    assume(f.knots.size >= 2)
    j = 0
    x = f.knots[j] + frac * (f.knots[j + 1] - f.knots[j])
    assume(f.knots[j] < x < f.knots[j + 1])
    knots = np.insert(f.knots, j + 1, x)
    g = StrassenFunction(knots, f(knots))
    assert energy(g) == pytest.approx(energy(f), rel=1e-9, abs=1e-12)


def test_extend_constant_examples():
    assert energy(extend_constant(strassen.zero(), 2.0)) == 0.0
    g = extend_constant(strassen.tent_ramp(), 1.0)
    assert g.right_level == 1.0 and g.left_level == 0.0
    assert energy(g) == energy(strassen.tent_ramp())


@given(pl_functions(), st.floats(0.1, 4))
def test_extend_constant_restriction(f, n):
    g = extend_constant(f, n)
    x = np.linspace(-n, n, 101)
    assert np.allclose(g(x), f(x), atol=1e-12)
    assert g(n + 3) == pytest.approx(float(f(n))) and g(-n - 3) == pytest.approx(float(f(-n)))
    assert energy(g) <= energy(f) + 1e-12


@given(pl_functions())
def test_restriction_of_Kstar_member_stays_in_Kstar(f):
    scale = energy(f)
    assume(scale > 0)
    h = f.scaled(1 / math.sqrt(scale))
    for s, r in [(-1, 1), (-0.5, 2), (-3, 0.25)]:
        assert is_in_Kstar(restrict(h, s, r), 1e-9)


def test_invalid_functions():
    with pytest.raises(ValueError):
        StrassenFunction([0.0, 0.0], [0.0, 1.0])
    with pytest.raises(ValueError):
        StrassenFunction([0.0, 1.0], [0.0])
    with pytest.raises(ValueError):
        restrict(strassen.tent_ramp(), 1.0, 1.0)


@given(pl_functions())
def test_csv_roundtrip(f):
    g = StrassenFunction.from_csv(f.to_csv())
    assert np.array_equal(g.knots, f.knots) and np.array_equal(g.values, f.values)


def test_csv_layout():
    lines = strassen.tent_ramp().to_csv().splitlines()
    assert lines[:3] == ["left_level,right_level", "0.0,1.0", "knot,value"]
    with pytest.raises(ValueError):
        StrassenFunction.from_csv("a,b\n1,2\nknot,value\n0,0\n")


def test_reflection_and_negation():
    f = strassen.tent_ramp()
    x = np.linspace(-2, 2, 41)
    assert np.array_equal(f.reflected()(x), f(-x))
    assert np.array_equal((-f)(x), -f(x))


def test_profile_at_zero_and_identity_stub():
    lam = 100.0
    p = rescale_profile(FunctionField(lambda x: x), lam)
    assert p.samples[p.t == 0.0][0] == 0.0
    assert np.allclose(p.samples, lam * p.t / math.sqrt(2 * lam * math.log(math.log(lam))))
    assert np.max(np.diff(p.t)) <= p.spacing + 1e-12


def test_profile_errors():
    w = QuenchedField(1, CONTINUUM)
    with pytest.raises(ValueError):
        rescale_profile(w, 15.0)
    with pytest.raises(ValueError):
        rescale_profile(w, 100.0, window=(0.0, 1.0))
    with pytest.raises(FieldKindError):
        rescale_profile(QuenchedField(1), 100.0)


def test_profile_variance_at_one():
    # Var W_100(1) = 100 / (2 * 100 * ln ln 100) = 1 / (2 ln ln 100)
    v = np.array([rescale_profile(QuenchedField(replica_seed(17, i), CONTINUUM), 100.0,
                                  (-0.5, 1.0), 1 / 4, level=2).samples[-1]
                  for i in range(10_000)])
    assert abs(v.var() / 0.32740091050880308 - 1) <= 0.05


def test_sup_distance_examples(continuum_field):
    p = rescale_profile(continuum_field, 200.0)
    f = strassen.tent_ramp()
    assert sup_distance(p, strassen.zero()) == pytest.approx(np.max(np.abs(p.samples)))
    same = strassen.RescaledProfile(p.lam, p.window, p.t, f(p.t), p.spacing)
    assert sup_distance(same, f) == 0.0
    shifted = strassen.RescaledProfile(p.lam, p.window, p.t, p.samples - f(p.t), p.spacing)
    assert sup_distance(p, f) == pytest.approx(sup_distance(shifted, strassen.zero()))


def test_lil_statistic_stub_and_monotone(continuum_field):
    assert uniform_lil_statistic(FunctionField(lambda x: 0 * x), 100.0) == 0.0
    small = uniform_lil_statistic(continuum_field, 300.0, (-2.0, 2.0))
    large = uniform_lil_statistic(continuum_field, 300.0, (-4.0, 4.0))
    assert large >= small


def test_lil_statistic_stable_over_seeds():
    # max over the grid stays within twice the median over the grid for most seeds
    lambdas = geometric_grid(3.0, 12.0, 0.25)
    stable = 0
    for seed in range(100):
        a = strassen.lil_statistic_over(QuenchedField(seed, CONTINUUM), lambdas, spacing=1 / 32)
        assert np.all(np.isfinite(a))
        stable += a.max() <= 2 * np.median(a)
    assert stable >= 90


def test_grid_helpers():
    g = geometric_grid(3.0, 12.0, 0.25)
    assert g.size == 37 and g[0] == pytest.approx(math.exp(3)) and g[-1] == pytest.approx(math.exp(12))
    assert 0.0 in lattice(-1, 1, 1 / 8).tolist()
    assert lattice(-1, 1, 1 / 8).size == 17
    assert dyadic_level_for(2.0) == 2 and dyadic_level_for(1 / 16) == 6
