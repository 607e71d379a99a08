import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgmlab.busemann import busemann_from_terminal, dual_weights, field_for_direction, reflected_field, sw_increments, terminal_for
from cgmlab.lattice import E1, E2, DomainError, LatticeWindow, Site
from cgmlab.lpp import lpp_value
from cgmlab.trees import (
    CLASSES,
    ArrowField,
    arrow_field,
    backward_cluster,
    check_arrow_identities,
    check_dual_consistency,
    check_noncrossing,
    check_xor_duality,
    classes_from_arrows,
    classify_pair,
    classify_points,
    cluster_sizes,
    coalescence,
    crosses,
    direction_ordered,
    dual_arrows_from_primal,
    dual_arrows_from_southwest,
    dual_path,
    follow_geodesic,
    follow_southwest,
    southwest_arrows,
    survival,
    trace,
    tree_edges,
)
from cgmlab.weights import make_weight_field


def _field(seed, alpha=0.5, N=400, lo=(-2, -2)):
    v = terminal_for(alpha, N)
    w = make_weight_field(seed, LatticeWindow(lo, v))
    return w, field_for_direction(w, alpha, N, lo=lo)


BOX = LatticeWindow((0, 0), (59, 59))


@pytest.fixture(scope="module")
def field7():
    return _field(7)[1]


def test_arrow_is_smaller_increment(field7):
    A = arrow_field(field7, BOX)
    b1, b2 = field7.on(BOX)
    assert np.array_equal(A.is_e1, b1 <= b2)
    x = Site(3, 4)
    assert A.arrow(x) == (E1 if field7.b1(x) < field7.b2(x) else E2)


def test_arrows_refuse_untrusted(field7):
    with pytest.raises(DomainError):
        arrow_field(field7, LatticeWindow((0, 0), (190, 10)))


def test_zero_step_geodesic(field7):
    A = arrow_field(field7, BOX)
    assert follow_geodesic(A, (5, 5), 0).sites == ((5, 5),)


@pytest.mark.parametrize("seed", range(5))
def test_exact_identities(seed):
    _, bf = _field(seed)
    A = arrow_field(bf, BOX)
    S = southwest_arrows(bf, BOX.shift((1, 1)))
    rng = np.random.default_rng(seed)
    starts = [BOX.site_at(*rng.integers(0, 30, 2)) for _ in range(100)]
    r = check_arrow_identities(bf, A, S, starts, length=40)
    assert r["passed"], r


def test_geodesic_weight_equals_passage_time(field7):
    w = make_weight_field(7, field7.window)
    A = arrow_field(field7, BOX)
    p = follow_geodesic(A, (2, 3), 40)
    assert p.weight(w) == pytest.approx(lpp_value(w, p.start, p.end), rel=1e-12)


def test_southwest_dual_recovery(field7):
    S = southwest_arrows(field7, BOX.shift((1, 1)))
    w1, w2 = sw_increments(field7, S.window)
    X = dual_weights(field7, S.window).X
    assert np.array_equal(X == w1, S.is_e1 | (w1 == w2))


def _mean_endpoint(alpha, N, seeds, steps=400):
    ends = []
    for seed in range(seeds):
        _, bf = _field(seed, alpha, N=N, lo=(0, 0))
        p = follow_geodesic(arrow_field(bf), (0, 0), steps).sites
        assert len(p) == steps + 1
        ends.append(p[-1].x1 / steps)
    return np.mean(ends)


def test_geodesic_direction():
    # one path wanders by ~ n**(2/3), so average the endpoint over environments
    assert 2 * abs(_mean_endpoint(0.5, 800, 100) - 0.5) < 0.05


def test_geodesic_direction_ordered_in_alpha():
    m = [_mean_endpoint(a, 1600, 10) for a in (0.3, 0.5, 0.7)]
    assert m[0] < 0.5 < m[2] and m[0] < m[1] < m[2]


def test_southwest_direction():
    v = terminal_for(0.5, 1600)
    ends = []
    for seed in range(40):
        w = make_weight_field(seed, LatticeWindow((-1200, -1200), v))
        bf = busemann_from_terminal(w, v, LatticeWindow((-1200, -1200), v), margin=400)
        q = follow_southwest(southwest_arrows(bf), (0, 0), 400)
        assert len(q) == 401
        ends.append(q[-1] - q[0])
    d = np.mean(ends, axis=0) / 400
    assert abs(d[0] + 0.5) + abs(d[1] + 0.5) < 0.05


def test_reflected_southwest_equals_forward():
    _, bf = _field(5, 0.5, N=200, lo=(-40, -40))
    rf = reflected_field(bf)
    sub = LatticeWindow((-30, -30), (-5, -5))
    S = southwest_arrows(bf, LatticeWindow((5, 5), (30, 30)))
    F = arrow_field(rf, sub)
    assert np.array_equal(S.is_e1[::-1, ::-1], F.is_e1)


def test_dual_from_primal_sitewise(field7):
    A = arrow_field(field7, BOX)
    D = dual_arrows_from_primal(A)
    checked, bad = check_dual_consistency(A, D)
    assert checked == BOX.area and bad == 0
    assert D.arrow((1, 1)) == (-E1 if A.is_e1[1, 1] else -E2)


@pytest.mark.parametrize("seed", range(5))
def test_xor_duality(seed):
    _, bf = _field(seed)
    A = arrow_field(bf, BOX)
    D = dual_arrows_from_southwest(southwest_arrows(bf, BOX.shift((1, 1))))
    r = check_xor_duality(A, D)
    assert r["checked"] == 2 * BOX.area and r["violations"] == 0


def test_xor_duality_by_edge_sets(field7):
    small = LatticeWindow((0, 0), (9, 9))
    A = arrow_field(field7, small)
    D = dual_arrows_from_southwest(southwest_arrows(field7, small.shift((1, 1))))
    E = tree_edges(A, D)
    for x, k in itertools.product(small.sites(), (1, 2)):
        dual = (x, 2) if k == 1 else (x, 1)
        assert ((x, k) in E.primal) != (dual in E.dual)


def test_xor_detects_broken_dual(field7):
    A = arrow_field(field7, BOX)
    D = dual_arrows_from_southwest(southwest_arrows(field7, BOX.shift((1, 1))))
    D.is_m1[10, 10] = ~D.is_m1[10, 10]
    assert check_xor_duality(A, D)["violations"] == 2


def test_noncrossing(field7):
    A = arrow_field(field7, BOX)
    D = dual_arrows_from_southwest(southwest_arrows(field7, BOX.shift((1, 1))))
    r = check_noncrossing(A, D, pairs=100, seed=1)
    assert r["passed"] and r["dual_edges_checked"] > 0


def test_crossing_is_detected():
    assert crosses([Site(0, 0), Site(1, 0)], [(Site(0, 0), 2)])
    assert not crosses([Site(0, 0), Site(1, 0)], [(Site(0, 0), 1)])


def test_dual_path_walks_down_left():
    D = dual_arrows_from_primal(ArrowField(LatticeWindow((0, 0), (2, 2)), np.ones((3, 3), dtype=bool)))
    assert [b for b, _ in dual_path(D, (2, 1))] == [(2, 1), (1, 1), (0, 1)]


def test_coalescence_trivial(field7):
    A = arrow_field(field7, BOX)
    m = coalescence(A, (4, 4), (4, 4))
    assert m.meet == (4, 4) and m.steps == 0


def test_adjacent_geodesics_share_a_tail(field7):
    A = arrow_field(field7, BOX)
    m = coalescence(A, (0, 0), (0, 1))
    assert m.meet is not None
    p = trace(A, (0, 0)).sites
    q = trace(A, (0, 1)).sites
    i, j = p.index(m.meet), q.index(m.meet)
    assert p[i:] == q[j:]


def test_monotone_in_direction():
    lo = (0, 0)
    wl = make_weight_field(2, LatticeWindow(lo, terminal_for(0.6, 800)))
    left = arrow_field(field_for_direction(wl, 0.4, 800, lo=lo))
    right = arrow_field(field_for_direction(wl, 0.6, 800, lo=lo))
    sub = left.window.intersect(right.window)
    L = ArrowField(sub, left.is_e1[left.window.slices(sub)])
    R = ArrowField(sub, right.is_e1[right.window.slices(sub)])
    for x in [(0, 0), (10, 3), (40, 40)]:
        assert direction_ordered(L, R, x)


@pytest.mark.parametrize("a_prev,a_cur", list(itertools.product([True, False], repeat=2)))
def test_relabeling_table(a_prev, a_cur):
    into_from_left = a_prev  # z - e1 -> z
    into_from_below = not a_cur  # z - e2 -> z
    expect = {(True, True): "c", (False, False): "s", (True, False): "h", (False, True): "v"}
    assert classify_pair(a_prev, a_cur) == expect[(into_from_left, into_from_below)]
    assert CLASSES[int(classes_from_arrows(np.array([a_prev, a_cur]))[0])] == classify_pair(a_prev, a_cur)


def test_classify_points_matches_codes(field7):
    A = arrow_field(field7, BOX)
    level = 60
    cls = classify_points(A, level, range(5, 50))
    a = np.array([A.is_e1[A.window.index(Site(j, level - j) - E2)] for j in range(4, 50)])
    assert cls == [CLASSES[c] for c in classes_from_arrows(a)]


def test_source_cluster_is_singleton(field7):
    A = arrow_field(field7, BOX)
    level = 50
    for j, c in zip(range(5, 45), classify_points(A, level, range(5, 45))):
        if c == "s":
            assert backward_cluster(A, Site(j, level - j)) == {Site(j, level - j)}
            break
    else:
        pytest.fail("no source point on the antidiagonal")


def test_cluster_recursion(field7):
    A = arrow_field(field7, BOX)
    z = Site(40, 40)
    parts = {z}
    for e, want in ((E1, True), (E2, False)):
        c = z - e
        if bool(A.is_e1[A.window.index(c)]) == want:
            parts |= backward_cluster(A, c)
    assert backward_cluster(A, z) == parts


def test_cluster_sizes_match_bfs(field7):
    A = arrow_field(field7, BOX)
    S, T = cluster_sizes(A.is_e1)
    for x in [(20, 20), (59, 59), (0, 5), (33, 12)]:
        assert S[x] == len(backward_cluster(A, x))
    assert T[0, 0] and T[59, 0]


@given(st.integers(0, 10**6))
@settings(max_examples=20)
def test_out_degree_and_tails(seed):
    rng = np.random.default_rng(seed)
    A = ArrowField(LatticeWindow((0, 0), (15, 15)), rng.random((16, 16)) < 0.5)
    S, _ = cluster_sizes(A.is_e1)
    # every site is counted once in the cluster of each site on its path
    assert S[15, 15] <= 256
    assert S.sum() == sum(len(trace(A, x).sites) for x in A.window.sites())


def test_survival_decreasing():
    S = np.array([1, 5, 20, 200, 2000])
    T = np.zeros(5, dtype=bool)
    s = survival(S, T, (10, 100, 1000))
    assert s[10] > s[100] > s[1000] > 0
