"""Max-plus dynamic programming for last-passage values.

``G_{x,y}`` is the largest weight sum over up-right paths from x to y,
both endpoints included.  Tables are filled one antidiagonal at a time;
every antidiagonal is a single vectorised update, and leading array
dimensions are treated as independent replicas.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .lattice import E1, E2, DomainError, LatticeWindow, Site, leq, site

# finite stand-in for -infinity (never NaN)
NEG = -np.finfo(np.float64).max / 4
BRUTE_FORCE_MAX_STEPS = 24


@lru_cache(maxsize=64)
def _wavefronts(m: int, n: int) -> tuple[tuple[np.ndarray, np.ndarray, np.ndarray], ...]:
    """Flat indices per antidiagonal: (index into the padded table, index into Y)."""
    W = n + 1
    out = []
    for d in range(m + n - 1):
        a = np.arange(max(0, d - n + 1), min(d, m - 1) + 1)
        b = d - a
        out.append(((a + 1) * W + (b + 1), a * n + b))
    return tuple(out)


def lpp_values(Y: np.ndarray, count_ties: bool = False):
    """Point-to-rectangle last-passage values from the corner ``[..., 0, 0]``.

    ``Y`` has shape ``(..., m, n)``; returns ``G`` of the same shape with
    ``G[..., a, b] = Y[..., a, b] + max(G[..., a-1, b], G[..., a, b-1])``
    and out-of-array predecessors treated as -infinity.  With
    ``count_ties`` also returns the number of exact predecessor ties.
    """
    Y = np.asarray(Y, dtype=np.float64)
    *batch, m, n = Y.shape
    W = n + 1
    P = np.full((*batch, m + 1, n + 1), NEG)
    P[..., 0, 1] = 0.0
    Pf = P.reshape(*batch, (m + 1) * (n + 1))
    Yf = Y.reshape(*batch, m * n)
    ties = 0
    for idx, yi in _wavefronts(m, n):
        left = Pf[..., idx - W]
        down = Pf[..., idx - 1]
        if count_ties:
            ties += int(np.count_nonzero((left == down) & (left > NEG)))
        Pf[..., idx] = Yf[..., yi] + np.maximum(left, down)
    G = P[..., 1:, 1:]
    return (G, ties) if count_ties else G


def lpp_values_backward(Y: np.ndarray, count_ties: bool = False):
    """Rectangle-to-point values ``G_{x, corner}`` toward the far corner ``[..., -1, -1]``."""
    Yr = np.flip(Y, axis=(-2, -1))
    res = lpp_values(Yr, count_ties)
    if count_ties:
        return np.flip(res[0], axis=(-2, -1)), res[1]
    return np.flip(res, axis=(-2, -1))


@dataclass(frozen=True)
class GeodesicPath:
    sites: tuple[Site, ...]

    def __post_init__(self):
        pts = tuple(site(s) for s in self.sites)
        object.__setattr__(self, "sites", pts)
        for a, b in zip(pts, pts[1:]):
            if b - a not in (E1, E2):
                raise DomainError(f"not an up-right step: {a} -> {b}")

    @property
    def steps(self) -> tuple[Site, ...]:
        return tuple(b - a for a, b in zip(self.sites, self.sites[1:]))

    def __len__(self) -> int:
        return len(self.sites)

    def __iter__(self):
        return iter(self.sites)

    @property
    def start(self) -> Site:
        return self.sites[0]

    @property
    def end(self) -> Site:
        return self.sites[-1]

    def weight(self, weights) -> float:
        return float(sum(weights.weight(s) for s in self.sites))

    def edges(self) -> set[tuple[Site, Site]]:
        return set(zip(self.sites, self.sites[1:]))


@dataclass(frozen=True)
class LppTable:
    base: Site
    orientation: Literal["forward", "backward"]
    window: LatticeWindow
    values: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    ties: int = 0

    def value(self, x) -> float:
        if x not in self.window:
            raise DomainError(f"{x} outside table window {self.window}")
        return float(self.values[self.window.index(x)])

    def __getitem__(self, x) -> float:
        return self.value(x)


def _weights_on(weights, window: LatticeWindow) -> np.ndarray:
    if isinstance(weights, np.ndarray):
        if weights.shape != window.shape:
            raise DomainError("weight array does not match the window")
        return weights.astype(np.float64)
    return weights.on(window)


def forward_lpp(weights, base, window: LatticeWindow) -> LppTable:
    """Table of ``G_{base, x}`` for every x in ``window`` (base = window.lo)."""
    base = site(base)
    if base not in window:
        raise DomainError(f"base {base} outside window {window}")
    if base != window.lo:
        raise DomainError("forward tables are rooted at window.lo")
    Y = _weights_on(weights, window)
    G, ties = lpp_values(Y, count_ties=True)
    return LppTable(base, "forward", window, G, Y, ties)


def backward_lpp(weights, terminal, window: LatticeWindow) -> LppTable:
    """Table of ``G_{x, terminal}`` for every x in ``window`` (terminal = window.hi)."""
    terminal = site(terminal)
    if terminal not in window:
        raise DomainError(f"terminal {terminal} outside window {window}")
    if terminal != window.hi:
        raise DomainError("backward tables end at window.hi")
    Y = _weights_on(weights, window)
    G, ties = lpp_values_backward(Y, count_ties=True)
    return LppTable(terminal, "backward", window, G, Y, ties)


def lpp_value(weights, x, y) -> float:
    """Single passage value ``G_{x,y}``; -inf when ``x <= y`` fails."""
    x, y = site(x), site(y)
    if not leq(x, y):
        return -math.inf
    w = LatticeWindow(x, y)
    return float(lpp_values(_weights_on(weights, w))[-1, -1])


def backtrack_geodesic(table: LppTable, start, end) -> GeodesicPath:
    """Maximizing path between ``start`` and ``end`` read off ``table``.

    Forward tables need ``start == table.base``; backward tables need
    ``end == table.base``.  Exact ties prefer e1 at the earliest step, so
    the result is the lexicographically first maximizer (as in
    ``brute_force_lpp``).
    """
    start, end = site(start), site(end)
    if not leq(start, end):
        raise DomainError(f"no up-right path from {start} to {end}")
    if start not in table.window or end not in table.window:
        raise DomainError("endpoints outside table window")
    if table.orientation == "forward":
        if start != table.base:
            raise DomainError("forward table geodesics start at the base")
        # walking forward needs values toward ``end``; recompute them on the
        # rectangle [start, end] from the stored weights
        rect = LatticeWindow(start, end)
        V = lpp_values_backward(table.weights[table.window.slices(rect)])
        win = rect
    else:
        if end != table.base:
            raise DomainError("backward table geodesics end at the terminal")
        V = table.values
        win = table.window
    pts = [start]
    x = start
    while x != end:
        if x.x1 == end.x1:
            x = x + E2
        elif x.x2 == end.x2:
            x = x + E1
        else:
            x = x + E1 if V[win.index(x + E1)] >= V[win.index(x + E2)] else x + E2
        pts.append(x)
    return GeodesicPath(tuple(pts))


def brute_force_lpp(weights, x, y) -> tuple[float, GeodesicPath]:
    """Exhaustive maximum over all up-right paths from x to y.

    Paths are visited in lexicographic order with e1 before e2 and only a
    strictly larger sum replaces the incumbent.
    """
    x, y = site(x), site(y)
    if not leq(x, y):
        raise DomainError(f"no up-right path from {x} to {y}")
    m, n = y.x1 - x.x1, y.x2 - x.x2
    if m + n > BRUTE_FORCE_MAX_STEPS:
        raise DomainError(f"enumeration refused: {m + n} steps exceeds {BRUTE_FORCE_MAX_STEPS}")
    Y = _weights_on(weights, LatticeWindow(x, y))
    L = m + n
    best = -math.inf
    best_steps: tuple[int, ...] = ()
    for e1_positions in itertools.combinations(range(L), m):
        pos = set(e1_positions)
        a = b = 0
        total = Y[0, 0]
        for k in range(L):
            if k in pos:
                a += 1
            else:
                b += 1
            total += Y[a, b]
        if total > best:
            best = total
            best_steps = e1_positions
    pts = [x]
    pos = set(best_steps)
    for k in range(L):
        pts.append(pts[-1] + (E1 if k in pos else E2))
    return float(best), GeodesicPath(tuple(pts))


def shape_function(xi1: float, xi2: float) -> float:
    """Limit shape ``(sqrt(xi1) + sqrt(xi2))**2`` of exponential LPP."""
    if xi1 < 0 or xi2 < 0:
        raise DomainError("shape function needs xi >= 0")
    return (math.sqrt(xi1) + math.sqrt(xi2)) ** 2


def shape_gradient(xi1: float, xi2: float) -> tuple[float, float]:
    if xi1 <= 0 or xi2 <= 0:
        raise DomainError("gradient needs xi > 0")
    return 1.0 + math.sqrt(xi2 / xi1), 1.0 + math.sqrt(xi1 / xi2)


def all_pairs_lpp(Y: np.ndarray) -> np.ndarray:
    """``G[a, b, c, d] = G_{(a,b),(c,d)}`` for every pair of array sites.

    Entries with ``(c, d) < (a, b)`` in some coordinate are NEG.  Memory is
    ``(m n)**2`` floats, so keep windows small.
    """
    Y = np.asarray(Y, dtype=np.float64)
    m, n = Y.shape
    shifted = np.zeros((m, n, m, n))
    for a in range(m):
        for b in range(n):
            shifted[a, b, : m - a, : n - b] = Y[a:, b:]
    Gs = lpp_values(shifted)
    out = np.full((m, n, m, n), NEG)
    for a in range(m):
        for b in range(n):
            out[a, b, a:, b:] = Gs[a, b, : m - a, : n - b]
    return out


@dataclass
class MonotonicityReport:
    passed: bool
    checked: int
    violations: int
    values: dict = field(default_factory=dict)


def check_planar_monotonicity(weights, x, y, v, window: LatticeWindow, tol: float = 1e-9) -> MonotonicityReport:
    """Check ``I_{x,v+e2} >= I_{x,v} >= I_{x,v+e1}`` and
    ``J_{y,v+e2} <= J_{y,v} <= J_{y,v+e1}``.

    ``I_{x,v} = G_{x,v} - G_{x+e1,v}`` and ``J_{y,v} = G_{y,v} - G_{y+e2,v}``.
    """
    x, y, v = site(x), site(y), site(v)
    if not leq(x, v - E1) or not leq(y, v - E2):
        raise DomainError("need x <= v - e1 and y <= v - e2")
    for p in (x, y, v + E1, v + E2):
        if p not in window:
            raise DomainError(f"{p} outside window {window}")

    def G(p, q):
        return lpp_value(weights, p, q)

    def I(p, q):
        return G(p, q) - G(p + E1, q)

    def J(p, q):
        return G(p, q) - G(p + E2, q)

    iv = (I(x, v + E2), I(x, v), I(x, v + E1))
    jv = (J(y, v + E2), J(y, v), J(y, v + E1))
    ok_i = iv[0] >= iv[1] - tol and iv[1] >= iv[2] - tol
    ok_j = jv[0] <= jv[1] + tol and jv[1] <= jv[2] + tol
    return MonotonicityReport(
        passed=ok_i and ok_j,
        checked=1,
        violations=int(not ok_i) + int(not ok_j),
        values={"I": iv, "J": jv},
    )


def planar_monotonicity_sweep(weights, window: LatticeWindow, tol: float = 1e-9) -> MonotonicityReport:
    """Check the planar monotonicity inequalities at every admissible
    ``(x, v)`` with ``x, v, v + e1, v + e2`` inside ``window``."""
    Y = _weights_on(weights, window)
    G = all_pairs_lpp(Y)
    m, n = Y.shape
    bad = 0
    checked = 0
    # G[x, v] over x-grid and v-grid; I_{x,v} = G[x,v] - G[x+e1,v]
    I = G[:-1, :, :, :] - G[1:, :, :, :]
    J = G[:, :-1, :, :] - G[:, 1:, :, :]
    for a in range(m - 1):
        for b in range(n):
            # terminals v with v >= x + e1, v + e1 and v + e2 in window
            Iv = I[a, b, a + 1 : m - 1, b : n - 1]
            Ive1 = I[a, b, a + 2 : m, b : n - 1]
            Ive2 = I[a, b, a + 1 : m - 1, b + 1 : n]
            checked += Iv.size
            bad += int(np.count_nonzero((Ive2 < Iv - tol) | (Iv < Ive1 - tol)))
    for a in range(m):
        for b in range(n - 1):
            Jv = J[a, b, a : m - 1, b + 1 : n - 1]
            Jve1 = J[a, b, a + 1 : m, b + 1 : n - 1]
            Jve2 = J[a, b, a : m - 1, b + 2 : n]
            checked += Jv.size
            bad += int(np.count_nonzero((Jve2 > Jv + tol) | (Jv > Jve1 + tol)))
    return MonotonicityReport(passed=bad == 0, checked=checked, violations=bad)
