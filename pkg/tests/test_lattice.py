import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cgmlab.lattice import E1, E2, DomainError, DownRightPath, LatticeWindow, Site, antidiagonal_indices

ints = st.integers(-50, 50)


def test_site_arithmetic():
    x = Site(2, 3)
    assert x + E1 == (3, 3) and x - E2 == (2, 2) and -x == (-2, -3)
    assert x.level == 5 and x.scale(2) == (4, 6)


@given(ints, ints, st.integers(0, 10), st.integers(0, 10))
def test_window_indexing(a, b, m, n):
    w = LatticeWindow((a, b), (a + m, b + n))
    assert w.shape == (m + 1, n + 1)
    for s in [w.lo, w.hi]:
        assert w.site_at(*w.index(s)) == s
    assert w.reflect().reflect() == w
    assert w.shift((3, -1)).lo == (a + 3, b - 1)
    assert len(list(w.sites())) == w.area


def test_empty_window_rejected():
    with pytest.raises(DomainError):
        LatticeWindow((1, 0), (0, 0))


def test_intersect_and_slices():
    w = LatticeWindow((0, 0), (9, 9))
    v = LatticeWindow((5, -3), (12, 4))
    i = w.intersect(v)
    assert i == LatticeWindow((5, 0), (9, 4))
    arr = np.arange(100).reshape(10, 10)
    assert arr[w.slices(i)].shape == i.shape
    assert w.intersect(LatticeWindow((20, 20), (21, 21))) is None
    with pytest.raises(DomainError):
        w.slices(v)


@given(st.integers(0, 30))
def test_staircase(h):
    p = DownRightPath.staircase((4, 4), h)
    assert p.y(0) == (4, 4) and len(p) == 2 * h + 1
    assert len(p.edges()) == 2 * h


def test_corner_and_axes():
    c = DownRightPath.corner((5, 5), 2, 3)
    assert c.sites[0] == (3, 5) and c.y(0) == (5, 5) and c.sites[-1] == (5, 2)
    a = DownRightPath.axes((0, 0), 2, 2)
    assert a.sites == ((0, 2), (0, 1), (0, 0), (1, 0), (2, 0))
    assert [k for k, _ in a.edges()] == ["J", "J", "I", "I"]


def test_illegal_step():
    with pytest.raises(DomainError):
        DownRightPath(((0, 0), (0, 1)))


@given(st.integers(1, 12), st.integers(1, 12))
def test_antidiagonals_cover_grid(m, n):
    seen = np.zeros((m, n), dtype=int)
    for d, (a, b) in enumerate(antidiagonal_indices(m, n)):
        assert ((a + b) == d).all()
        seen[a, b] += 1
    assert (seen == 1).all()
