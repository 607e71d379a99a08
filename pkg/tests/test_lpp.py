import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cgmlab.lattice import DomainError, LatticeWindow, Site
from cgmlab.lpp import (
    backtrack_geodesic,
    backward_lpp,
    brute_force_lpp,
    check_planar_monotonicity,
    forward_lpp,
    lpp_value,
    lpp_values,
    planar_monotonicity_sweep,
    shape_function,
    shape_gradient,
)
from cgmlab.stationary import direction_of_alpha
from cgmlab.weights import ArrayWeights, make_weight_field

small = st.tuples(st.integers(1, 5), st.integers(1, 5)).flatmap(
    lambda s: arrays(np.float64, s, elements=st.floats(0.01, 10.0))
)


def test_two_by_two_fixture(two_by_two):
    w = two_by_two.window
    t = forward_lpp(two_by_two, w.lo, w)
    assert t[(1, 1)] == 7.0
    assert backtrack_geodesic(t, (0, 0), (1, 1)).sites == ((0, 0), (1, 0), (1, 1))
    assert backward_lpp(two_by_two, w.hi, w)[(0, 0)] == 7.0
    val, path = brute_force_lpp(two_by_two, (0, 0), (1, 1))
    assert val == 7.0 and path.sites == ((0, 0), (1, 0), (1, 1))


def test_single_site(two_by_two):
    w = LatticeWindow((1, 0), (1, 0))
    assert forward_lpp(two_by_two.on(w), w.lo, w)[(1, 0)] == 5.0
    t = forward_lpp(two_by_two, (0, 0), two_by_two.window)
    assert backtrack_geodesic(t, (0, 0), (0, 0)).sites == ((0, 0),)


def test_axis_sum():
    f = make_weight_field(3, LatticeWindow((0, 0), (9, 0)))
    t = forward_lpp(f, (0, 0), f.window)
    assert t[(9, 0)] == pytest.approx(f.values().sum(), rel=1e-12)
    assert brute_force_lpp(f, (0, 0), (9, 0))[0] == pytest.approx(f.values().sum(), rel=1e-12)


@given(small)
def test_recursion_invariant(Y):
    G = lpp_values(Y)
    m, n = Y.shape
    for a, b in itertools.product(range(m), range(n)):
        preds = [G[a - 1, b]] if a else []
        preds += [G[a, b - 1]] if b else []
        assert G[a, b] - Y[a, b] == pytest.approx(max(preds, default=0.0), abs=1e-9)


@given(small)
@settings(max_examples=60)
def test_matches_brute_force(Y):
    w = ArrayWeights(Y, LatticeWindow((0, 0), (Y.shape[0] - 1, Y.shape[1] - 1)))
    t = forward_lpp(w, (0, 0), w.window)
    val, path = brute_force_lpp(w, w.window.lo, w.window.hi)
    assert t[w.window.hi] == pytest.approx(val, rel=1e-9)
    assert path.weight(w) == pytest.approx(val, rel=1e-9)


@pytest.mark.parametrize("seed", range(100))
def test_oracle_on_four_by_four(seed):
    f = make_weight_field(seed, LatticeWindow((0, 0), (3, 3)))
    t = forward_lpp(f, (0, 0), f.window)
    val, path = brute_force_lpp(f, (0, 0), (3, 3))
    assert abs(t[(3, 3)] - val) <= 1e-9 * val
    assert backtrack_geodesic(t, (0, 0), (3, 3)).sites == path.sites


def test_backward_equals_rebased_forward():
    f = make_weight_field(9, LatticeWindow((0, 0), (29, 29)))
    back = backward_lpp(f, (29, 29), f.window)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, 30, size=(50, 2)):
        x = Site(int(a), int(b))
        w = LatticeWindow(x, (29, 29))
        assert back[x] == pytest.approx(forward_lpp(f, x, w)[(29, 29)], rel=1e-12)


@given(st.integers(0, 1000))
@settings(max_examples=30)
def test_split_along_geodesic(seed):
    f = make_weight_field(seed, LatticeWindow((0, 0), (11, 8)))
    t = forward_lpp(f, (0, 0), f.window)
    path = backtrack_geodesic(t, (0, 0), (11, 8))
    assert path.weight(f) == pytest.approx(t[(11, 8)], rel=1e-12)
    for y in path.sites:
        total = lpp_value(f, (0, 0), y) + lpp_value(f, y, (11, 8)) - f.weight(y)
        assert total == pytest.approx(t[(11, 8)], rel=1e-12)


def test_forced_tie_prefers_e1():
    Y = np.ones((2, 2))
    w = ArrayWeights(Y, LatticeWindow((0, 0), (1, 1)))
    t = forward_lpp(w, (0, 0), w.window)
    assert t.ties == 1
    assert backtrack_geodesic(t, (0, 0), (1, 1)).steps[0] == (1, 0)
    assert brute_force_lpp(w, (0, 0), (1, 1))[1].steps[0] == (1, 0)


def test_lpp_value_unordered_is_minus_inf(two_by_two):
    assert lpp_value(two_by_two, (1, 0), (0, 1)) == -math.inf


def test_brute_force_refuses_large():
    f = make_weight_field(0, LatticeWindow((0, 0), (20, 20)))
    with pytest.raises(DomainError):
        brute_force_lpp(f, (0, 0), (20, 20))


def test_batch_dimension_is_replicas():
    f = [make_weight_field(s, LatticeWindow((0, 0), (6, 9))).values() for s in range(4)]
    G = lpp_values(np.stack(f))
    for k in range(4):
        assert np.array_equal(G[k], lpp_values(f[k]))


@pytest.mark.parametrize("xi,g", [((1, 1), 4.0), ((4, 1), 9.0), ((0, 3), 3.0)])
def test_shape_values(xi, g):
    assert shape_function(*xi) == pytest.approx(g)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_gradient_at_characteristic_direction(alpha):
    u1 = direction_of_alpha(alpha)
    assert shape_gradient(u1, 1 - u1) == pytest.approx((1 / alpha, 1 / (1 - alpha)))


@given(st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.01, 100))
def test_homogeneity(a, b, t):
    assert shape_function(t * a, t * b) == pytest.approx(t * shape_function(a, b), rel=1e-12)


def test_strict_concavity():
    grid = np.linspace(0.05, 0.95, 10)
    for u1, w1 in itertools.product(grid, grid):
        if u1 == w1:
            continue
        d = shape_gradient(u1, 1 - u1)
        assert shape_function(w1, 1 - w1) < d[0] * w1 + d[1] * (1 - w1)


def test_planar_monotonicity_sweep():
    for s in range(3):
        rep = planar_monotonicity_sweep(make_weight_field(s, LatticeWindow((0, 0), (14, 14))), LatticeWindow((0, 0), (14, 14)))
        assert rep.passed and rep.checked > 0


def test_planar_monotonicity_degenerate_corner():
    f = make_weight_field(1, LatticeWindow((0, 0), (6, 6)))
    v = Site(4, 4)
    rep = check_planar_monotonicity(f, v - (1, 0), v - (0, 1), v, f.window)
    assert rep.passed
    assert rep.values["I"][1] == pytest.approx(lpp_value(f, v - (1, 0), v) - f.weight(v))


def test_planar_monotonicity_constant_weights():
    w = ArrayWeights(np.ones((8, 8)), LatticeWindow((0, 0), (7, 7)))
    assert planar_monotonicity_sweep(w, w.window).passed
