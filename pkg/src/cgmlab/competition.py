"""Boundary last-passage processes on either side of a down-right path.

Northeast of the path (region H+) the process uses the dual weights X and
boundary values ``B(y0, y_k)``; southwest of it (region H-) it uses the
original weights Y and boundary values ``B(y_k, y0)``.  Only a finite slice
of the path is stored, so the recursion sees -inf beyond it; the exact
identities are checked on sites whose southwest (resp. forward) arrow path
provably reaches the stored slice.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .busemann import BusemannField, dual_window, sw_increments
from .lattice import E1, E2, DomainError, DownRightPath, LatticeWindow, Site, site
from .lpp import NEG

NO_ROOT = np.iinfo(np.int64).min


def region_labels(path: DownRightPath, window: LatticeWindow) -> np.ndarray:
    """+1 on H+, 0 on the path, -1 on H-, and 2 where the stored slice
    cannot decide (diagonals x1 - x2 it does not cross)."""
    m, n = window.shape
    x1, x2 = window.coords()
    diag = (x1 - x2) * np.ones((1, n), dtype=np.int64)
    lab = np.full((m, n), 2, dtype=np.int8)
    for y in path.sites:
        on = diag == (y.x1 - y.x2)
        col = x1 * np.ones((1, n), dtype=np.int64)
        lab[on & (col > y.x1)] = 1
        lab[on & (col < y.x1)] = -1
        lab[on & (col == y.x1)] = 0
    return lab


def _levels(window: LatticeWindow):
    m, n = window.shape
    for d in range(m + n - 1):
        a = np.arange(max(0, d - n + 1), min(d, m - 1) + 1)
        yield a, d - a


@dataclass
class BoundaryLpp:
    side: str
    boundary: DownRightPath
    window: LatticeWindow
    H: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    root: np.ndarray = field(repr=False)
    target: np.ndarray = field(repr=False)
    ties: int = 0

    def value(self, x) -> float:
        return float(self.H[self.window.index(x)])

    def root_of(self, x) -> int | None:
        r = int(self.root[self.window.index(x)])
        return None if r == NO_ROOT else r

    @property
    def checked(self) -> np.ndarray:
        """Region sites whose geodesic reaches the stored boundary slice."""
        return (self.labels != 2) & (self.root != NO_ROOT)

    def identity_residual(self) -> tuple[int, float]:
        ok = self.checked
        if not ok.any():
            return 0, 0.0
        return int(ok.sum()), float(np.max(np.abs(self.H[ok] - self.target[ok])))


def _check_inside(path: DownRightPath, window: LatticeWindow):
    for y in path.sites:
        if y not in window:
            raise DomainError(f"boundary site {y} outside the window {window}")


def boundary_lpp_plus(bf: BusemannField, boundary: DownRightPath, window: LatticeWindow) -> BoundaryLpp:
    """``H+_x = X_x + max(H+_{x-e1}, H+_{x-e2})`` northeast of the boundary,
    ``H+_{y_k} = B(y0, y_k)`` on it."""
    dw = dual_window(bf)
    if not dw.contains_window(window):
        raise DomainError(f"{window} needs dual weights outside the field")
    _check_inside(boundary, window)
    w1, w2 = sw_increments(bf, window)
    X = np.minimum(w1, w2)
    sw_m1 = w1 <= w2
    G = bf.G[bf.window.slices(window)]
    y0 = boundary.y(0)
    g0 = bf.passage(y0)
    lab = region_labels(boundary, window)
    m, n = window.shape
    H = np.full((m, n), NEG)
    R = np.full((m, n), NO_ROOT, dtype=np.int64)
    for k, y in zip(boundary.k_range, boundary.sites):
        a, b = window.index(y)
        H[a, b] = g0 - G[a, b]
        R[a, b] = k
    ties = 0
    for a, b in _levels(window):
        sel = lab[a, b] == 1
        a, b = a[sel], b[sel]
        if a.size == 0:
            continue
        left = np.where(a > 0, H[np.maximum(a - 1, 0), b], NEG)
        down = np.where(b > 0, H[a, np.maximum(b - 1, 0)], NEG)
        ties += int(np.count_nonzero((left == down) & (left > NEG)))
        H[a, b] = X[a, b] + np.maximum(left, down)
        # root along the southwest arrow
        step1 = sw_m1[a, b]
        pa = np.where(step1, a - 1, a)
        pb = np.where(step1, b, b - 1)
        inside = (pa >= 0) & (pb >= 0)
        r = np.full(a.size, NO_ROOT, dtype=np.int64)
        r[inside] = R[pa[inside], pb[inside]]
        R[a, b] = r
    target = g0 - G
    return BoundaryLpp("+", boundary, window, H, lab, R, target, ties)


def boundary_lpp_minus(bf: BusemannField, boundary: DownRightPath, window: LatticeWindow) -> BoundaryLpp:
    """``H-_x = Y_x + max(H-_{x+e1}, H-_{x+e2})`` southwest of the boundary,
    ``H-_{y_k} = B(y_k, y0)`` on it."""
    if not bf.window.contains_window(window):
        raise DomainError(f"{window} is not inside the field window")
    if not (window.hi.x1 < bf.terminal.x1 and window.hi.x2 < bf.terminal.x2):
        raise DomainError("window must stay strictly below the terminal")
    _check_inside(boundary, window)
    sl = bf.window.slices(window)
    Y = bf.Y[sl]
    G = bf.G[sl]
    b1, b2 = bf.B1[sl], bf.B2[sl]
    fwd_e1 = b1 <= b2
    y0 = boundary.y(0)
    g0 = bf.passage(y0)
    lab = region_labels(boundary, window)
    m, n = window.shape
    H = np.full((m, n), NEG)
    R = np.full((m, n), NO_ROOT, dtype=np.int64)
    for k, y in zip(boundary.k_range, boundary.sites):
        a, b = window.index(y)
        H[a, b] = G[a, b] - g0
        R[a, b] = k
    ties = 0
    for a, b in reversed(list(_levels(window))):
        sel = lab[a, b] == -1
        a, b = a[sel], b[sel]
        if a.size == 0:
            continue
        right = np.where(a + 1 < m, H[np.minimum(a + 1, m - 1), b], NEG)
        up = np.where(b + 1 < n, H[a, np.minimum(b + 1, n - 1)], NEG)
        ties += int(np.count_nonzero((right == up) & (right > NEG)))
        H[a, b] = Y[a, b] + np.maximum(right, up)
        step1 = fwd_e1[a, b]
        na = np.where(step1, a + 1, a)
        nb = np.where(step1, b, b + 1)
        inside = (na < m) & (nb < n)
        r = np.full(a.size, NO_ROOT, dtype=np.int64)
        r[inside] = R[na[inside], nb[inside]]
        R[a, b] = r
    target = G - g0
    return BoundaryLpp("-", boundary, window, H, lab, R, target, ties)


def maximizing_path(blpp: BoundaryLpp, x) -> tuple[Site, ...]:
    """Argmax path of the boundary process from x back to the boundary."""
    x = site(x)
    win = blpp.window
    pts = [x]
    sign = -1 if blpp.side == "+" else 1
    while blpp.labels[win.index(pts[-1])] != 0:
        z = pts[-1]
        c1, c2 = z + E1.scale(sign), z + E2.scale(sign)
        h1 = blpp.value(c1) if c1 in win else NEG
        h2 = blpp.value(c2) if c2 in win else NEG
        if h1 == NEG and h2 == NEG:
            break
        pts.append(c1 if h1 >= h2 else c2)
    return tuple(pts)


@dataclass
class Interface:
    sites: tuple[Site, ...]
    truncated: bool
    ties: int = 0


def competition_interface_plus(blpp: BoundaryLpp, m: int, max_steps: int = 10**9) -> Interface:
    """Up-right interface between geodesics rooted at ``y_k, k <= m`` and
    ``y_k, k >= m + 1``: start at whichever of y_m, y_{m+1} has the smaller
    boundary value, then step toward the smaller of the two H+ values."""
    if blpp.side != "+":
        raise DomainError("expected an H+ process")
    path = blpp.boundary
    if m not in path.k_range or m + 1 not in path.k_range:
        raise DomainError("y_m and y_{m+1} must lie on the stored boundary")
    ym, yn = path.y(m), path.y(m + 1)
    hm, hn = blpp.value(ym), blpp.value(yn)
    ties = int(hm == hn)
    phi = [ym if hm < hn else yn]
    win = blpp.window
    truncated = False
    ok = blpp.checked
    for _ in range(max_steps):
        z = phi[-1]
        c1, c2 = z + E1, z + E2
        if c1 not in win or c2 not in win or not (ok[win.index(c1)] and ok[win.index(c2)]):
            truncated = True
            break
        h1, h2 = blpp.value(c1), blpp.value(c2)
        ties += int(h1 == h2)
        phi.append(c1 if h1 < h2 else c2)
    return Interface(tuple(phi), truncated, ties)


def interface_minus_from(blpp: BoundaryLpp, start, max_steps: int = 10**9) -> Interface:
    """Down-left interface of an H- process from a boundary point, stepping
    toward the smaller of the two H- values (ties to -e1)."""
    if blpp.side != "-":
        raise DomainError("expected an H- process")
    win = blpp.window
    phi = [site(start)]
    ok = blpp.checked
    truncated = False
    ties = 0
    for _ in range(max_steps):
        z = phi[-1]
        c1, c2 = z - E1, z - E2
        if c1 not in win or c2 not in win or not (ok[win.index(c1)] and ok[win.index(c2)]):
            truncated = True
            break
        h1, h2 = blpp.value(c1), blpp.value(c2)
        ties += int(h1 == h2)
        phi.append(c1 if h1 <= h2 else c2)
    return Interface(tuple(phi), truncated, ties)


def check_separation(blpp: BoundaryLpp, phi: Interface, m: int, max_samples: int | None = None, seed: int = 0) -> dict:
    """Sites straight above an interface point root at ``k <= m``; sites
    straight to its right root at ``k >= m + 1``."""
    win = blpp.window
    cands = []
    for z in phi.sites:
        for e, left in ((E2, True), (E1, False)):
            x = z + e
            while x in win:
                r = blpp.root_of(x)
                if blpp.labels[win.index(x)] in (0, 1) and r is not None:
                    cands.append((x, r, left))
                x = x + e
    if max_samples is not None and len(cands) > max_samples:
        rng = np.random.default_rng(seed)
        cands = [cands[i] for i in rng.choice(len(cands), max_samples, replace=False)]
    bad = sum(1 for _, r, left in cands if (r > m if left else r <= m))
    return {"checked": len(cands), "violations": bad, "passed": len(cands) > 0 and bad == 0}
