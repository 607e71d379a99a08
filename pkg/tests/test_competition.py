import numpy as np
import pytest

from cgmlab.busemann import field_for_direction, terminal_for
from cgmlab.competition import (
    NO_ROOT,
    boundary_lpp_minus,
    boundary_lpp_plus,
    check_separation,
    competition_interface_plus,
    interface_minus_from,
    maximizing_path,
    region_labels,
)
from cgmlab.lattice import DomainError, DownRightPath, LatticeWindow, Site
from cgmlab.trees import arrow_field, southwest_arrows, trace
from cgmlab.weights import make_weight_field

SIDE = 60
H = SIDE // 2
WIN = LatticeWindow((-H, -H), (H - 1, H - 1))


def _field(seed, alpha=0.5, N=400):
    v = terminal_for(alpha, N)
    w = make_weight_field(seed, LatticeWindow((-SIDE, -SIDE), v))
    return field_for_direction(w, alpha, N, lo=(-SIDE, -SIDE))


@pytest.fixture(scope="module", params=[0, 1, 2])
def plus(request):
    bf = _field(request.param)
    path = DownRightPath.staircase((0, 0), 2 * H - 2)
    return bf, boundary_lpp_plus(bf, path, WIN)


def test_region_labels():
    path = DownRightPath.staircase((0, 0), 2)
    lab = region_labels(path, LatticeWindow((-3, -3), (3, 3)))
    idx = lambda x: (x[0] + 3, x[1] + 3)
    assert lab[idx((0, 0))] == 0 and lab[idx((1, 1))] == 1 and lab[idx((-1, -1))] == -1
    assert lab[idx((3, -3))] == 2


def test_boundary_values_are_increments(plus):
    bf, bl = plus
    y0 = bl.boundary.y(0)
    for y in bl.boundary.sites:
        assert bl.value(y) == pytest.approx(bf.increment(y0, y), abs=1e-12)


def test_plus_identity(plus):
    bf, bl = plus
    n, r = bl.identity_residual()
    assert n > 500 and r < 1e-9


def test_maximizing_path_is_southwest_geodesic(plus):
    bf, bl = plus
    S = southwest_arrows(bf, WIN)
    done = 0
    for x in [Site(10, 10), Site(20, 5), Site(3, 25), Site(28, 28)]:
        if bl.checked[WIN.index(x)] and bl.labels[WIN.index(x)] == 1:
            p = maximizing_path(bl, x)
            assert p == trace(S, x, len(p) - 1).sites
            assert bl.labels[WIN.index(p[-1])] == 0
            done += 1
    assert done > 0


def test_interface_first_site(plus):
    _, bl = plus
    for m in (-3, 0, 4):
        phi = competition_interface_plus(bl, m, max_steps=0)
        ym, yn = bl.boundary.y(m), bl.boundary.y(m + 1)
        assert phi.sites[0] == (ym if bl.value(ym) < bl.value(yn) else yn)


def test_interface_is_a_geodesic(plus):
    bf, bl = plus
    A = arrow_field(bf, WIN)
    phi = competition_interface_plus(bl, 1, max_steps=40)
    assert len(phi.sites) > 1
    assert phi.sites == trace(A, phi.sites[0], len(phi.sites) - 1).sites


@pytest.mark.parametrize("m", [-2, 1, 5])
def test_separation(plus, m):
    _, bl = plus
    phi = competition_interface_plus(bl, m, max_steps=40)
    r = check_separation(bl, phi, m, max_samples=500, seed=0)
    assert r["passed"], r


def test_interface_needs_stored_points(plus):
    _, bl = plus
    with pytest.raises(DomainError):
        competition_interface_plus(bl, 10**6)


@pytest.fixture(scope="module", params=[0, 3])
def minus(request):
    bf = _field(request.param)
    apex = Site(H - 1, H - 1)
    corner = DownRightPath.corner(apex, SIDE - 1, SIDE - 1)
    return bf, apex, boundary_lpp_minus(bf, corner, WIN)


def test_minus_identity(minus):
    bf, _, bm = minus
    n, r = bm.identity_residual()
    assert n == WIN.area and r < 1e-9
    assert bm.value(bm.boundary.y(0)) == 0.0


def test_minus_boundary_degenerate(minus):
    bf, _, bm = minus
    y0 = bm.boundary.y(0)
    for y in bm.boundary.sites[::7]:
        assert bm.value(y) == pytest.approx(bf.increment(y, y0), abs=1e-12)


def test_corner_interface_is_southwest_geodesic(minus):
    bf, apex, bm = minus
    S = southwest_arrows(bf, WIN)
    psi = interface_minus_from(bm, apex)
    assert len(psi.sites) > 10
    assert psi.sites == trace(S, apex, len(psi.sites) - 1).sites


def test_minus_window_below_terminal():
    bf = _field(0, N=100)
    with pytest.raises(DomainError):
        boundary_lpp_minus(bf, DownRightPath.staircase((10, 10), 4), LatticeWindow((0, 0), bf.terminal))


def test_roots_missing_off_slice():
    bf = _field(1)
    path = DownRightPath.staircase((0, 0), 6)
    bl = boundary_lpp_plus(bf, path, WIN)
    assert (bl.root[bl.labels == 2] == NO_ROOT).all()
    assert bl.checked.sum() < (bl.labels == 1).sum() + len(path)
