"""Geodesic trees driven by a finite-horizon Busemann field.

The forward arrow at x points to the neighbour with the smaller outgoing
increment (ties to e1); the southwest arrow at x points to the neighbour
with the smaller incoming increment (ties to -e1).  The dual arrow at
``x + (1/2, 1/2)`` is read off the southwest arrow at ``x + e1 + e2``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .busemann import BusemannField, dual_window, sw_increments
from .lattice import E1, E2, DomainError, LatticeWindow, Site, site
from .lpp import GeodesicPath

CLASSES = ("s", "c", "h", "v")
# (arrow at z-e1 is e1, arrow at z-e2 is e1) -> class
_CLASS_OF = {(False, True): "s", (True, False): "c", (True, True): "h", (False, False): "v"}


@dataclass(frozen=True)
class ArrowField:
    """``is_e1[x]`` over ``window``; ``southwest`` fields point to -e1 / -e2."""

    window: LatticeWindow
    is_e1: np.ndarray = field(repr=False)
    ties: int = 0
    southwest: bool = False

    def arrow(self, x) -> Site:
        e = E1 if self.is_e1[self.window.index(x)] else E2
        return -e if self.southwest else e

    def __contains__(self, x) -> bool:
        return x in self.window

    def frequency_e1(self) -> float:
        return float(self.is_e1.mean())


def _sub_or_trusted(bf: BusemannField, sub: LatticeWindow | None) -> LatticeWindow:
    t = bf.trusted
    if t is None:
        raise DomainError("the field has an empty trusted window")
    if sub is None:
        return t
    if not t.contains_window(sub):
        raise DomainError(f"{sub} is not inside the trusted window {t}")
    return sub


def arrow_field(bf: BusemannField, sub: LatticeWindow | None = None) -> ArrowField:
    win = _sub_or_trusted(bf, sub)
    b1, b2 = bf.on(win)
    return ArrowField(win, b1 <= b2, int(np.count_nonzero(b1 == b2)))


def southwest_arrows(bf: BusemannField, sub: LatticeWindow | None = None) -> ArrowField:
    """Southwest arrows on the trusted window minus its lowest row and column."""
    if sub is None:
        t = _sub_or_trusted(bf, None)
        sub = t.intersect(dual_window(bf))
        if sub is None:
            raise DomainError("no site has both southwest neighbours in the field")
    else:
        _sub_or_trusted(bf, sub)
    w1, w2 = sw_increments(bf, sub)
    return ArrowField(sub, w1 <= w2, int(np.count_nonzero(w1 == w2)), southwest=True)


def follow_geodesic(arrows: ArrowField, x, max_steps: int = 10**9) -> GeodesicPath:
    """Path along forward arrows until ``max_steps`` or the window edge."""
    if arrows.southwest:
        raise DomainError("expected a forward arrow field")
    return trace(arrows, x, max_steps).path


def follow_southwest(arrows: ArrowField, x, max_steps: int = 10**9) -> tuple[Site, ...]:
    """Site sequence x, x + a(x), ... along southwest arrows."""
    if not arrows.southwest:
        raise DomainError("expected a southwest arrow field")
    return trace(arrows, x, max_steps).sites


@dataclass
class Trace:
    sites: tuple[Site, ...]
    truncated: bool
    southwest: bool = False

    @property
    def path(self) -> GeodesicPath:
        """As an up-right path (southwest traces are reversed)."""
        return GeodesicPath(self.sites[::-1] if self.southwest else self.sites)


def trace(arrows: ArrowField, x, max_steps: int = 10**9) -> Trace:
    x = site(x)
    if x not in arrows.window:
        raise DomainError(f"{x} outside the arrow window {arrows.window}")
    lo = arrows.window.lo
    A = arrows.is_e1
    a, b = x.x1 - lo.x1, x.x2 - lo.x2
    m, n = A.shape
    d = -1 if arrows.southwest else 1
    pts = [x]
    truncated = False
    for _ in range(max_steps):
        if A[a, b]:
            a += d
        else:
            b += d
        if not (0 <= a < m and 0 <= b < n):
            truncated = True
            break
        pts.append(Site(lo.x1 + a, lo.x2 + b))
    return Trace(tuple(pts), truncated, arrows.southwest)


# ------------------------------------------------------------------ identities


def check_arrow_identities(bf: BusemannField, arrows: ArrowField, sw: ArrowField, starts, length: int = 40, tol: float = 1e-9) -> dict:
    """Residuals of the exact identities along the arrow structure.

    * ``Y_x = B(x, x + a(x))`` at every arrow site;
    * ``X_x = B(x + a_sw(x), x)`` at every southwest-arrow site;
    * ``G(g_i, g_j) = B(g_i, g_j) + Y_{g_j}`` for the endpoints of geodesic
      segments started at ``starts``, with G computed by a fresh forward DP.
    """
    from .lpp import lpp_values

    b1, b2 = bf.on(arrows.window)
    Y = bf.Y[bf.window.slices(arrows.window)]
    arrow_weight = float(np.max(np.abs(Y - np.where(arrows.is_e1, b1, b2))))
    w1, w2 = sw_increments(bf, sw.window)
    X = np.minimum(w1, w2)
    sw_arrow_weight = float(np.max(np.abs(X - np.where(sw.is_e1, w1, w2))))
    worst = 0.0
    for x in starts:
        p = trace(arrows, x, length).sites
        if len(p) < 2:
            continue
        a, b = p[0], p[-1]
        sub = LatticeWindow(a, b)
        G = float(lpp_values(bf.Y[bf.window.slices(sub)])[-1, -1])
        worst = max(worst, abs(G - (bf.increment(a, b) + bf.weight(b))))
        s = sum(bf.weight(q) for q in p)
        worst = max(worst, abs(G - s))
    return {
        "arrow_weight": arrow_weight,
        "sw_arrow_weight": sw_arrow_weight,
        "geodesic_weight": worst,
        "passed": max(arrow_weight, sw_arrow_weight, worst) <= tol,
    }


# ------------------------------------------------------------------ dual tree


@dataclass(frozen=True)
class DualArrowField:
    """Dual arrows at ``base + (1/2, 1/2)`` for bases in ``window``;
    ``is_m1`` marks the -e1 direction."""

    window: LatticeWindow
    is_m1: np.ndarray = field(repr=False)

    def arrow(self, base) -> Site:
        return -E1 if self.is_m1[self.window.index(base)] else -E2


def dual_arrows_from_primal(arrows: ArrowField) -> DualArrowField:
    return DualArrowField(arrows.window, arrows.is_e1.copy())


def dual_arrows_from_southwest(sw: ArrowField) -> DualArrowField:
    """Dual arrow at ``x + (1/2, 1/2)`` equals the southwest arrow at ``x + e1 + e2``."""
    win = sw.window.shift((-1, -1))
    return DualArrowField(win, sw.is_e1.copy())


def check_dual_consistency(arrows: ArrowField, dual: DualArrowField) -> tuple[int, int]:
    """Sitewise ``arrow(x) = e1 <=> dual(x) = -e1``; returns (checked, mismatches)."""
    common = arrows.window.intersect(dual.window)
    if common is None:
        return 0, 0
    a = arrows.is_e1[arrows.window.slices(common)]
    d = dual.is_m1[dual.window.slices(common)]
    return int(a.size), int(np.count_nonzero(a != d))


@dataclass
class TreeEdges:
    """Primal tree edges keyed by ``(x, k)`` for the edge x -> x + e_k and
    dual edges keyed by ``(b, k)`` for ``b* -> b* - e_k``."""

    primal: set
    dual: set


def tree_edges(arrows: ArrowField, dual: DualArrowField) -> TreeEdges:
    P = {(s, 1 if arrows.is_e1[arrows.window.index(s)] else 2) for s in arrows.window.sites()}
    D = {(b, 1 if dual.is_m1[dual.window.index(b)] else 2) for b in dual.window.sites()}
    return TreeEdges(P, D)


def crossing_dual(x: Site, k: int) -> tuple[Site, int]:
    """The dual edge crossing the primal edge x -> x + e_k.

    Edge x -> x + e1 is crossed by the dual edge from ``x*`` to ``(x - e2)*``;
    edge x -> x + e2 by the dual edge from ``x*`` to ``(x - e1)*``.
    """
    return (x, 2) if k == 1 else (x, 1)


def check_xor_duality(arrows: ArrowField, dual: DualArrowField, sub: LatticeWindow | None = None) -> dict:
    """Exhaustive check that each primal edge is in the tree exactly when
    its crossing dual edge is not in the dual tree."""
    sub = arrows.window.intersect(dual.window) if sub is None else sub
    A = arrows.is_e1[arrows.window.slices(sub)]
    D = dual.is_m1[dual.window.slices(sub)]
    # horizontal edge x -> x+e1: in T iff A; crossing dual (x, -e2) in T* iff not D
    horiz_bad = np.count_nonzero(A == ~D)
    # vertical edge x -> x+e2: in T iff not A; crossing dual (x, -e1) in T* iff D
    vert_bad = np.count_nonzero((~A) == D)
    checked = 2 * A.size
    bad = int(horiz_bad + vert_bad)
    return {"checked": checked, "violations": bad, "passed": bad == 0}


def dual_path(dual: DualArrowField, base, max_steps: int = 10**9) -> list[tuple[Site, int]]:
    """Dual edges (base, k) visited from ``base*`` following dual arrows."""
    b = site(base)
    out = []
    for _ in range(max_steps):
        if b not in dual.window:
            break
        k = 1 if dual.is_m1[dual.window.index(b)] else 2
        out.append((b, k))
        b = b - (E1 if k == 1 else E2)
    return out


def crosses(primal_path, dual_edges) -> bool:
    """True if some dual edge crosses an edge of the primal site path."""
    crossed = set()
    for a, b in zip(primal_path, primal_path[1:]):
        crossed.add(crossing_dual(a, 1 if b - a == E1 else 2))
    return any(e in crossed for e in dual_edges)


def check_noncrossing(arrows: ArrowField, dual: DualArrowField, pairs: int = 100, seed: int = 0, max_steps: int = 10**6) -> dict:
    rng = np.random.default_rng(seed)
    m, n = arrows.window.shape
    bad = 0
    sample_cross = 0
    for _ in range(pairs):
        x = arrows.window.site_at(int(rng.integers(0, m)), int(rng.integers(0, n)))
        y = dual.window.site_at(int(rng.integers(0, dual.window.shape[0])), int(rng.integers(0, dual.window.shape[1])))
        p = trace(arrows, x, max_steps).sites
        d = dual_path(dual, y, max_steps)
        sample_cross += len(d)
        if crosses(p, d):
            bad += 1
    return {"pairs": pairs, "crossing_pairs": bad, "dual_edges_checked": sample_cross, "passed": bad == 0}


# -------------------------------------------------------------- coalescence


@dataclass
class Meeting:
    meet: Site | None
    steps: int
    truncated: bool


def coalescence(arrows: ArrowField, x, y, max_steps: int = 10**9) -> Meeting:
    """First common site of the arrow paths from x and y.

    ``steps`` counts the moves made by both walkers together.
    """
    if arrows.southwest:
        raise DomainError("coalescence follows forward arrows")
    x, y = site(x), site(y)
    for s in (x, y):
        if s not in arrows.window:
            raise DomainError(f"{s} outside the arrow window")
    steps = 0
    while x != y and steps < max_steps:
        if x.level <= y.level:
            x = x + arrows.arrow(x)
            moved = x
        else:
            y = y + arrows.arrow(y)
            moved = y
        steps += 1
        if moved not in arrows.window:
            return Meeting(None, steps, True)
    return Meeting(x if x == y else None, steps, False)


def direction_ordered(left: ArrowField, right: ArrowField, x, max_steps: int = 10**9) -> bool:
    """The path under ``right`` (direction with larger u1) never sits strictly
    to the left of the path under ``left`` on any common antidiagonal."""
    p = trace(left, x, max_steps).sites
    q = trace(right, x, max_steps).sites
    return all(b.x1 >= a.x1 for a, b in zip(p, q))


# ----------------------------------------------------------- classification


def classify_pair(a_prev: bool, a_cur: bool) -> str:
    """Class of z from the arrows at z - e1 (a_prev) and z - e2 (a_cur); True = e1."""
    return _CLASS_OF[(bool(a_prev), bool(a_cur))]


def classify_points(arrows: ArrowField, level: int, j_range) -> list[str]:
    """Classes of ``z_j = (j, level - j)`` for j in ``j_range``."""
    out = []
    for j in j_range:
        z = Site(j, level - j)
        a, b = z - E1, z - E2
        if a not in arrows.window or b not in arrows.window:
            raise DomainError(f"neighbours of {z} leave the arrow window")
        out.append(classify_pair(arrows.is_e1[arrows.window.index(a)], arrows.is_e1[arrows.window.index(b)]))
    return out


def antidiagonal_arrows(is_e1: np.ndarray, lo: Site, level: int, j0: int, j1: int) -> np.ndarray:
    """Arrows ``a_j`` at ``z_j - e2 = (j, level - j - 1)`` for ``j0 - 1 <= j <= j1``.

    ``is_e1`` may carry leading replica axes; the last two are indexed from ``lo``.
    """
    j = np.arange(j0 - 1, j1 + 1)
    return is_e1[..., j - lo.x1, level - j - 1 - lo.x2]


def classes_from_arrows(a: np.ndarray) -> np.ndarray:
    """Class codes 0..3 (s, c, h, v) of consecutive pairs along the last axis."""
    prev, cur = a[..., :-1], a[..., 1:]
    code = np.where(prev, np.where(cur, 2, 1), np.where(cur, 0, 3))
    return code


# ------------------------------------------------------------------ clusters


def backward_cluster(arrows: ArrowField, x) -> set[Site]:
    """Sites whose arrow path passes through x (x included)."""
    x = site(x)
    if x not in arrows.window:
        raise DomainError(f"{x} outside the arrow window")
    out = {x}
    q = deque([x])
    while q:
        z = q.popleft()
        for e, want in ((E1, True), (E2, False)):
            c = z - e
            if c in arrows.window and bool(arrows.is_e1[arrows.window.index(c)]) == want:
                out.add(c)
                q.append(c)
    return out


def cluster_sizes(is_e1: np.ndarray):
    """Backward-cluster size of every site and whether it may continue past
    the lower window edge (``truncated``)."""
    m, n = is_e1.shape
    S = np.ones((m, n), dtype=np.int64)
    T = np.zeros((m, n), dtype=bool)
    T[0, :] = True
    T[:, 0] = True
    for d in range(m + n - 1):
        a = np.arange(max(0, d - n + 1), min(d, m - 1) + 1)
        b = d - a
        e1 = is_e1[a, b]
        r = e1 & (a + 1 < m)
        np.add.at(S, (a[r] + 1, b[r]), S[a[r], b[r]])
        T[a[r] + 1, b[r]] |= T[a[r], b[r]]
        u = ~e1 & (b + 1 < n)
        np.add.at(S, (a[u], b[u] + 1), S[a[u], b[u]])
        T[a[u], b[u] + 1] |= T[a[u], b[u]]
    return S, T


def survival(sizes: np.ndarray, truncated: np.ndarray, ks) -> dict:
    """``P(|C| > k)`` with truncated clusters counted only when already > k."""
    out = {}
    for k in ks:
        big = sizes > k
        usable = ~truncated | big
        out[int(k)] = float(big[usable].mean()) if usable.any() else float("nan")
    return out
