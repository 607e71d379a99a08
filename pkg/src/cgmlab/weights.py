"""Counter-based exponential weights keyed by (seed, lane, site).

Every weight is a pure function of its key, so any sub-window, any
evaluation order and any number of workers see the same environment.
Boundary and bulk weights of one experiment use distinct lanes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .lattice import DomainError, LatticeWindow, Site, site

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1

# purpose tags mixed into the seed
LANE_BULK = 0
LANE_BOUNDARY_I = 1
LANE_BOUNDARY_J = 2
LANE_STATIONARY_BULK = 3
LANE_ORACLE = 7

_U_FLOOR = 2.0 ** -64


def _mix(z: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer, wrapping uint64 arithmetic
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _key(seed: int, lane: int) -> np.uint64:
    with np.errstate(over="ignore"):
        z = np.array([(int(seed) + int(lane) * 0x632BE59BD9B4E019) & _MASK64], dtype=np.uint64)
        return _mix(_mix(z) + _GOLDEN)[0]


def hash_sites(seed: int, x1, x2, lane: int = LANE_BULK) -> np.ndarray:
    """64-bit hash of (seed, lane, x1, x2); broadcasts over x1, x2."""
    k = _key(seed, lane)
    a = np.atleast_1d(np.asarray(x1, dtype=np.int64)).view(np.uint64)
    b = np.atleast_1d(np.asarray(x2, dtype=np.int64)).view(np.uint64)
    with np.errstate(over="ignore"):
        h = _mix(k + a * _GOLDEN)
        h = _mix(h + b * _GOLDEN + _M2)
    return h


def uniform_from_hash(h: np.ndarray) -> np.ndarray:
    """Map 64-bit hashes to U in (0, 1); U never falls below 2**-64."""
    # 52 bits keep k + 0.5 exact, so U <= 1 - 2**-53 < 1
    u = ((h >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0 ** -52
    return np.maximum(u, _U_FLOOR)


def exp_from_uniform(u, rate: float = 1.0):
    """Inverse-CDF transform -ln(U)/rate."""
    if not rate > 0:
        raise DomainError(f"rate must be positive, got {rate}")
    return -np.log(u) / rate


def exp_sample(seed: int, x, rate: float = 1.0, lane: int = LANE_BULK) -> float:
    """Exp(rate) weight at site ``x`` of environment ``seed``."""
    if not rate > 0:
        raise DomainError(f"rate must be positive, got {rate}")
    s = site(x)
    u = uniform_from_hash(hash_sites(seed, s.x1, s.x2, lane))[0]
    return float(-math.log(u) / rate)


def exp_field(seed: int, x1, x2, rate: float = 1.0, lane: int = LANE_BULK) -> np.ndarray:
    """Vectorised ``exp_sample`` over broadcast coordinate arrays."""
    if not rate > 0:
        raise DomainError(f"rate must be positive, got {rate}")
    x1, x2 = np.broadcast_arrays(np.asarray(x1, dtype=np.int64), np.asarray(x2, dtype=np.int64))
    h = hash_sites(seed, x1.ravel(), x2.ravel(), lane).reshape(x1.shape)
    return -np.log(uniform_from_hash(h)) / rate


@dataclass(frozen=True)
class WeightField:
    """Lazily evaluated i.i.d. Exp(rate) weights.

    ``offset`` shifts the hash key: ``field.shifted(z).weight(x) ==
    field.weight(x + z)``.
    """

    seed: int
    window: LatticeWindow
    rate: float = 1.0
    lane: int = LANE_BULK
    offset: Site = field(default=Site(0, 0))

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError(f"rate must be positive, got {self.rate}")
        object.__setattr__(self, "offset", site(self.offset))

    def weight(self, x) -> float:
        s = site(x)
        return exp_sample(self.seed, s + self.offset, self.rate, self.lane)

    def on(self, window: LatticeWindow | None = None) -> np.ndarray:
        """Weights over ``window`` (default: the field's own window) as an
        array indexed ``[x1 - lo1, x2 - lo2]``."""
        w = self.window if window is None else window
        x1, x2 = w.coords()
        return exp_field(self.seed, x1 + self.offset.x1, x2 + self.offset.x2, self.rate, self.lane)

    def values(self) -> np.ndarray:
        return self.on(self.window)

    def shifted(self, z) -> "WeightField":
        return replace(self, offset=self.offset + site(z))

    def with_window(self, window: LatticeWindow) -> "WeightField":
        return replace(self, window=window)


def make_weight_field(seed: int, window: LatticeWindow, rate: float = 1.0, lane: int = LANE_BULK) -> WeightField:
    if not isinstance(window, LatticeWindow):
        raise DomainError("window must be a LatticeWindow")
    if window.area <= 0:
        raise DomainError("empty window")
    return WeightField(seed=int(seed), window=window, rate=rate, lane=lane)


@dataclass(frozen=True)
class ArrayWeights:
    """Fixed weights given as an array over ``window``; test fixtures use it
    in place of a sampled field."""

    array: np.ndarray
    window: LatticeWindow

    def __post_init__(self):
        arr = np.asarray(self.array, dtype=np.float64)
        if arr.shape != self.window.shape:
            raise DomainError(f"array shape {arr.shape} does not match window {self.window.shape}")
        object.__setattr__(self, "array", arr)

    def weight(self, x) -> float:
        if x not in self.window:
            raise DomainError(f"{x} outside fixed weight window")
        return float(self.array[self.window.index(x)])

    def on(self, window: LatticeWindow | None = None) -> np.ndarray:
        w = self.window if window is None else window
        return self.array[self.window.slices(w)].copy()

    def values(self) -> np.ndarray:
        return self.array.copy()


def batch_weights(seeds, window: LatticeWindow, rate: float = 1.0, lane: int = LANE_BULK) -> np.ndarray:
    """Stack of weight arrays, one per seed, shape ``(len(seeds), m, n)``."""
    x1, x2 = window.coords()
    return np.stack([exp_field(s, x1, x2, rate, lane) for s in seeds])
