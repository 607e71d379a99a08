"""Lattice sites, rectangular windows and down-right paths."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np


class Site(NamedTuple):
    x1: int
    x2: int

    def __add__(self, other):  # type: ignore[override]
        return Site(self.x1 + other[0], self.x2 + other[1])

    def __sub__(self, other):
        return Site(self.x1 - other[0], self.x2 - other[1])

    def __neg__(self):
        return Site(-self.x1, -self.x2)

    def scale(self, k: int) -> "Site":
        return Site(k * self.x1, k * self.x2)

    @property
    def level(self) -> int:
        """Index of the antidiagonal through the site."""
        return self.x1 + self.x2


E1 = Site(1, 0)
E2 = Site(0, 1)
ORIGIN = Site(0, 0)


def site(x) -> Site:
    return x if isinstance(x, Site) else Site(int(x[0]), int(x[1]))


def leq(x, y) -> bool:
    """Coordinatewise order x <= y."""
    return x[0] <= y[0] and x[1] <= y[1]


def l1(x) -> int:
    return abs(x[0]) + abs(x[1])


class DualSite(NamedTuple):
    """The dual-lattice point ``base + (1/2, 1/2)``."""

    base: Site

    def coords(self) -> tuple[float, float]:
        return (self.base.x1 + 0.5, self.base.x2 + 0.5)


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


@dataclass(frozen=True)
class LatticeWindow:
    lo: Site
    hi: Site

    def __post_init__(self):
        object.__setattr__(self, "lo", site(self.lo))
        object.__setattr__(self, "hi", site(self.hi))
        if not leq(self.lo, self.hi):
            raise DomainError(f"empty window: lo={self.lo} hi={self.hi}")

    @classmethod
    def box(cls, center, radius: int) -> "LatticeWindow":
        c = site(center)
        return cls(c - (radius, radius), c + (radius, radius))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.hi.x1 - self.lo.x1 + 1, self.hi.x2 - self.lo.x2 + 1)

    @property
    def area(self) -> int:
        m, n = self.shape
        return m * n

    def __contains__(self, x) -> bool:
        return leq(self.lo, x) and leq(x, self.hi)

    def contains_window(self, other: "LatticeWindow") -> bool:
        return other.lo in self and other.hi in self

    def index(self, x) -> tuple[int, int]:
        """Array index of site ``x`` in arrays laid out over this window."""
        return (x[0] - self.lo.x1, x[1] - self.lo.x2)

    def site_at(self, a: int, b: int) -> Site:
        return Site(self.lo.x1 + a, self.lo.x2 + b)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcastable coordinate grids (x1 as a column, x2 as a row)."""
        m, n = self.shape
        x1 = np.arange(self.lo.x1, self.lo.x1 + m, dtype=np.int64)[:, None]
        x2 = np.arange(self.lo.x2, self.lo.x2 + n, dtype=np.int64)[None, :]
        return x1, x2

    def intersect(self, other: "LatticeWindow") -> "LatticeWindow | None":
        lo = Site(max(self.lo.x1, other.lo.x1), max(self.lo.x2, other.lo.x2))
        hi = Site(min(self.hi.x1, other.hi.x1), min(self.hi.x2, other.hi.x2))
        return LatticeWindow(lo, hi) if leq(lo, hi) else None

    def shift(self, z) -> "LatticeWindow":
        return LatticeWindow(self.lo + z, self.hi + z)

    def reflect(self) -> "LatticeWindow":
        return LatticeWindow(-self.hi, -self.lo)

    def slices(self, sub: "LatticeWindow") -> tuple[slice, slice]:
        """Array slices selecting ``sub`` inside arrays laid out over ``self``."""
        if not self.contains_window(sub):
            raise DomainError(f"{sub} is not inside {self}")
        a0, b0 = self.index(sub.lo)
        m, n = sub.shape
        return slice(a0, a0 + m), slice(b0, b0 + n)

    def sites(self) -> Iterator[Site]:
        for a in range(self.shape[0]):
            for b in range(self.shape[1]):
                yield self.site_at(a, b)


@dataclass(frozen=True)
class DownRightPath:
    """Finite slice ``y_k, k0 <= k < k0 + len(sites)`` of a down-right path.

    ``origin_index`` is the position of ``y_0`` inside ``sites``.
    """

    sites: tuple[Site, ...]
    origin_index: int = 0

    def __post_init__(self):
        pts = tuple(site(s) for s in self.sites)
        object.__setattr__(self, "sites", pts)
        for a, b in zip(pts, pts[1:]):
            step = b - a
            if step not in (E1, Site(0, -1)):
                raise DomainError(f"illegal down-right step {a} -> {b}")
        if not 0 <= self.origin_index < len(pts):
            raise DomainError("origin_index outside the path")

    def __len__(self) -> int:
        return len(self.sites)

    def y(self, k: int) -> Site:
        return self.sites[k + self.origin_index]

    @property
    def k_range(self) -> range:
        return range(-self.origin_index, len(self.sites) - self.origin_index)

    def edges(self) -> list[tuple[str, Site]]:
        """Edge variables along the path as ``("I", x)`` for edge {x-e1, x}
        and ``("J", x)`` for edge {x-e2, x}."""
        out = []
        for a, b in zip(self.sites, self.sites[1:]):
            if b - a == E1:
                out.append(("I", b))
            else:
                out.append(("J", a))
        return out

    def index_of(self) -> dict[Site, int]:
        return {s: i - self.origin_index for i, s in enumerate(self.sites)}

    @classmethod
    def staircase(cls, center, half_steps: int) -> "DownRightPath":
        """Alternating e1 / -e2 path through ``center`` with ``half_steps``
        unit steps on either side; ``y_0 = center``."""
        c = site(center)
        pts = [c]
        for k in range(half_steps):
            prev = pts[-1]
            pts.append(prev + E1 if k % 2 == 0 else prev - E2)
        back = [c]
        for k in range(half_steps):
            prev = back[-1]
            back.append(prev + E2 if k % 2 == 0 else prev - E1)
        sites = back[::-1] + pts[1:]
        return cls(tuple(sites), origin_index=half_steps)

    @classmethod
    def corner(cls, apex, west: int, south: int) -> "DownRightPath":
        """North-and-east boundary of the quadrant below ``apex``:
        ``y_k = apex - k^+ e2 - k^- e1``."""
        a = site(apex)
        pts = [a - (w, 0) for w in range(west, 0, -1)] + [a] + [a - (0, s) for s in range(1, south + 1)]
        return cls(tuple(pts), origin_index=west)

    @classmethod
    def axes(cls, corner, west: int, south: int) -> "DownRightPath":
        """Coordinate-axes boundary ``y_k = corner + k^+ e1 + k^- e2``."""
        c = site(corner)
        pts = [c + (0, w) for w in range(west, 0, -1)] + [c] + [c + (s, 0) for s in range(1, south + 1)]
        return cls(tuple(pts), origin_index=west)


def antidiagonal_indices(m: int, n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Array index pairs (a, b) of each antidiagonal a + b = d of an m x n grid."""
    return [_antidiagonal(m, n, d) for d in range(m + n - 1)]


def _antidiagonal(m: int, n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.arange(max(0, d - n + 1), min(d, m - 1) + 1)
    return a, d - a


def as_sites(points: Sequence) -> list[Site]:
    return [site(p) for p in points]
