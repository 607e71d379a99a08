"""Exponential-alpha last-passage systems built in a quadrant.

Inputs are independent I weights on the x-axis (Exp(alpha)), J weights on
the y-axis (Exp(1 - alpha)) and bulk zeta weights (Exp(1)).  The interior
is filled northeast by

    eta_{x-e1-e2} = I_{x-e2} ^ J_{x-e1}
    I_x = zeta_x + (I_{x-e2} - J_{x-e1})^+
    J_x = zeta_x + (I_{x-e2} - J_{x-e1})^-

Array layout for an m x n quadrant (bulk sites 1..m x 1..n):

    zeta[i-1, j-1]   zeta at (i, j)
    I[i-1, j]        I at (i, j),  i >= 1, j >= 0
    J[i, j-1]        J at (i, j),  i >= 0, j >= 1
    eta[i, j]        eta at (i, j), 0 <= i < m, 0 <= j < n
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import stats

from .lattice import E1, E2, DomainError, DownRightPath, LatticeWindow, Site, site
from .lpp import LppTable, lpp_values
from .weights import LANE_BOUNDARY_I, LANE_BOUNDARY_J, LANE_STATIONARY_BULK, exp_field


def alpha_of_direction(u1: float) -> float:
    if not 0.0 < u1 < 1.0:
        raise DomainError(f"direction coordinate must lie in (0, 1), got {u1}")
    r = math.sqrt(u1)
    return r / (r + math.sqrt(1.0 - u1))


def direction_of_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    a2 = alpha * alpha
    return a2 / ((1.0 - alpha) ** 2 + a2)


@dataclass(frozen=True)
class DirectionParam:
    u1: float
    alpha: float

    @classmethod
    def from_alpha(cls, alpha: float) -> "DirectionParam":
        return cls(direction_of_alpha(alpha), alpha)

    @classmethod
    def from_u1(cls, u1: float) -> "DirectionParam":
        return cls(u1, alpha_of_direction(u1))

    @property
    def u(self) -> tuple[float, float]:
        return (self.u1, 1.0 - self.u1)


@dataclass(frozen=True)
class StationarySystem:
    alpha: float
    size: tuple[int, int]
    zeta: np.ndarray = field(repr=False)
    I: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    eta: np.ndarray = field(repr=False)
    seed: int | None = None

    def I_at(self, x) -> float:
        return float(self.I[x[0] - 1, x[1]])

    def J_at(self, x) -> float:
        return float(self.J[x[0], x[1] - 1])

    def zeta_at(self, x) -> float:
        return float(self.zeta[x[0] - 1, x[1] - 1])

    def eta_at(self, x) -> float:
        return float(self.eta[x[0], x[1]])

    def has_I(self, x) -> bool:
        m, n = self.size
        return 1 <= x[0] <= m and 0 <= x[1] <= n

    def has_J(self, x) -> bool:
        m, n = self.size
        return 0 <= x[0] <= m and 1 <= x[1] <= n

    def has_eta(self, x) -> bool:
        m, n = self.size
        return 0 <= x[0] < m and 0 <= x[1] < n

    def edge_value(self, kind: str, x) -> float:
        return self.I_at(x) if kind == "I" else self.J_at(x)


@lru_cache(maxsize=32)
def _fill_order(m: int, n: int):
    out = []
    for d in range(m + n - 1):
        k1 = np.arange(max(0, d - n + 1), min(d, m - 1) + 1)
        k2 = d - k1
        out.append((k1 * (n + 1) + k2, k1 * n + k2, k1 * n + k2))
    return tuple(out)


def fill_quadrant(I_axis: np.ndarray, J_axis: np.ndarray, zeta: np.ndarray):
    """Northeast fill of the quadrant; arrays may carry leading replica axes.

    ``I_axis[..., i-1]`` is I at (i, 0), ``J_axis[..., j-1]`` is J at (0, j)
    and ``zeta[..., i-1, j-1]`` is zeta at (i, j).  Returns ``(I, J, eta)``.
    """
    zeta = np.asarray(zeta, dtype=np.float64)
    *batch, m, n = zeta.shape
    I = np.empty((*batch, m, n + 1))
    J = np.empty((*batch, m + 1, n))
    I[..., :, 0] = I_axis
    J[..., 0, :] = J_axis
    eta = np.empty((*batch, m, n))
    If = I.reshape(*batch, m * (n + 1))
    Jf = J.reshape(*batch, (m + 1) * n)
    zf = zeta.reshape(*batch, m * n)
    ef = eta.reshape(*batch, m * n)
    for i_idx, j_idx, z_idx in _fill_order(m, n):
        below = If[..., i_idx]
        left = Jf[..., j_idx]
        z = zf[..., z_idx]
        diff = below - left
        If[..., i_idx + 1] = z + np.maximum(diff, 0.0)
        Jf[..., j_idx + n] = z + np.maximum(-diff, 0.0)
        ef[..., z_idx] = np.minimum(below, left)
    return I, J, eta


def _check_args(alpha: float, m: int, n: int):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if m < 1 or n < 1:
        raise DomainError("quadrant needs m, n >= 1")


def stationary_inputs(alpha: float, seed: int, m: int, n: int):
    """Boundary and bulk inputs from three independent seed lanes."""
    i = np.arange(1, m + 1)
    j = np.arange(1, n + 1)
    I_axis = exp_field(seed, i, 0, alpha, LANE_BOUNDARY_I)
    J_axis = exp_field(seed, 0, j, 1.0 - alpha, LANE_BOUNDARY_J)
    zeta = exp_field(seed, i[:, None], j[None, :], 1.0, LANE_STATIONARY_BULK)
    return I_axis, J_axis, zeta


def build_stationary_quadrant(alpha: float, seed: int, m: int, n: int) -> StationarySystem:
    _check_args(alpha, m, n)
    I_axis, J_axis, zeta = stationary_inputs(alpha, seed, m, n)
    I, J, eta = fill_quadrant(I_axis, J_axis, zeta)
    return StationarySystem(alpha, (m, n), zeta, I, J, eta, seed)


def stationary_from_inputs(alpha: float, I_axis, J_axis, zeta) -> StationarySystem:
    zeta = np.asarray(zeta, dtype=np.float64)
    m, n = zeta.shape
    _check_args(alpha, m, n)
    I, J, eta = fill_quadrant(np.asarray(I_axis, float), np.asarray(J_axis, float), zeta)
    return StationarySystem(alpha, (m, n), zeta, I, J, eta)


def build_stationary_batch(alpha: float, seeds, m: int, n: int):
    """Arrays ``(zeta, I, J, eta)`` for many seeds at once (leading axis = seed)."""
    _check_args(alpha, m, n)
    ins = [stationary_inputs(alpha, s, m, n) for s in seeds]
    I_axis = np.stack([t[0] for t in ins])
    J_axis = np.stack([t[1] for t in ins])
    zeta = np.stack([t[2] for t in ins])
    I, J, eta = fill_quadrant(I_axis, J_axis, zeta)
    return zeta, I, J, eta


def _lpp_weights(zeta, I, J):
    *batch, m, n = zeta.shape
    Y = np.zeros((*batch, m + 1, n + 1))
    Y[..., 1:, 0] = I[..., :, 0]
    Y[..., 0, 1:] = J[..., 0, :]
    Y[..., 1:, 1:] = zeta
    return Y


def stationary_lpp(system: StationarySystem) -> LppTable:
    """Increment-stationary process: ``G_0 = 0``, axis sums of I and J, and
    ``G_x = zeta_x + max(G_{x-e1}, G_{x-e2})`` in the bulk."""
    Y = _lpp_weights(system.zeta, system.I, system.J)
    m, n = system.size
    G = lpp_values(Y)
    return LppTable(Site(0, 0), "forward", LatticeWindow((0, 0), (m, n)), G, Y)


def stationary_lpp_batch(zeta, I, J) -> np.ndarray:
    return lpp_values(_lpp_weights(zeta, I, J))


@dataclass
class StructureReport:
    max_eta_residual: float
    max_I_residual: float
    max_J_residual: float
    max_zeta_residual: float
    max_increment_residual: float | None = None
    passage_scale: float = 1.0

    @property
    def max_residual(self) -> float:
        """Largest residual of the four local equations."""
        return max(self.max_eta_residual, self.max_I_residual, self.max_J_residual, self.max_zeta_residual)

    @property
    def relative_increment_residual(self) -> float | None:
        if self.max_increment_residual is None:
            return None
        return self.max_increment_residual / max(1.0, self.passage_scale)

    def passed(self, tol: float = 1e-12) -> bool:
        # The local equations involve O(1) numbers; passage values grow with the
        # box, so increments of G are held to the same tolerance relative to |G|.
        inc = self.relative_increment_residual
        return self.max_residual <= tol and (inc is None or inc <= tol)


def structure_residuals(zeta, I, J, eta, G=None) -> StructureReport:
    """Largest violation of the four structural equations (and, given the
    stationary LPP values G, of the increment identities)."""
    below = I[..., :, :-1]
    left = J[..., :-1, :]
    Ix = I[..., :, 1:]
    Jx = J[..., 1:, :]
    r_eta = np.max(np.abs(eta - np.minimum(below, left)))
    r_I = np.max(np.abs(Ix - (zeta + np.maximum(below - left, 0.0))))
    r_J = np.max(np.abs(Jx - (zeta + np.maximum(left - below, 0.0))))
    r_z = np.max(np.abs(zeta - np.minimum(Ix, Jx)))
    r_inc = None
    scale = 1.0
    if G is not None:
        scale = float(np.max(np.abs(G)))
        dI = G[..., 1:, :] - G[..., :-1, :]
        dJ = G[..., :, 1:] - G[..., :, :-1]
        r_inc = float(max(np.max(np.abs(dI - I)), np.max(np.abs(dJ - J))))
    return StructureReport(float(r_eta), float(r_I), float(r_J), float(r_z), r_inc, scale)


def check_structure(system: StationarySystem) -> StructureReport:
    G = stationary_lpp(system).values
    return structure_residuals(system.zeta, system.I, system.J, system.eta, G)


def _path_inside(system_size, path: DownRightPath) -> None:
    m, n = system_size
    for kind, x in path.edges():
        ok = (1 <= x[0] <= m and 0 <= x[1] <= n) if kind == "I" else (0 <= x[0] <= m and 1 <= x[1] <= n)
        if not ok:
            raise DomainError(f"path edge {kind}{tuple(x)} leaves the quadrant")


def southwest_sites(path: DownRightPath, size) -> list[Site]:
    """Eta sites strictly southwest of the path (``z + j(e1+e2)`` on it for some j >= 1)."""
    m, n = size
    on_path = set(path.sites)
    out = []
    for i in range(m):
        for j in range(n):
            z = Site(i, j)
            for k in range(1, m + n + 1):
                if z + (k, k) in on_path:
                    out.append(z)
                    break
    return out


@dataclass
class DownRightLawReport:
    replicas: int
    n_I_edges: int
    n_J_edges: int
    replica_ks_pass_I: float
    replica_ks_pass_J: float
    edge_ks_pass: float
    max_edge_correlation: float
    max_edge_eta_correlation: float
    correlation_bound: float
    ks_level: float
    gates: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.gates.values())


def check_downright_law(
    alpha: float,
    path: DownRightPath,
    seeds,
    size: tuple[int, int],
    ks_level: float = 0.01,
    replica_pass: float = 0.95,
    chunk: int = 2000,
    n_eta: int = 40,
) -> DownRightLawReport:
    """Marginal and independence checks of the edge variables along ``path``.

    Per replica, the I-edges are pooled and KS-tested against Exp(alpha),
    the J-edges against Exp(1 - alpha).  Across replicas every edge is
    KS-tested on its own, and all pairwise correlations among edges and
    between edges and eta weights southwest of the path are bounded by
    ``4 / sqrt(replicas)``.
    """
    m, n = size
    _check_args(alpha, m, n)
    _path_inside(size, path)
    edges = path.edges()
    sw = southwest_sites(path, size)
    if len(sw) > n_eta:
        pick = np.linspace(0, len(sw) - 1, n_eta).round().astype(int)
        sw = [sw[i] for i in pick]
    seeds = list(seeds)
    I_idx = [(x[0] - 1, x[1]) for k, x in edges if k == "I"]
    J_idx = [(x[0], x[1] - 1) for k, x in edges if k == "J"]
    samples_I, samples_J, samples_eta = [], [], []
    for start in range(0, len(seeds), chunk):
        _, I, J, eta = build_stationary_batch(alpha, seeds[start : start + chunk], m, n)
        samples_I.append(np.stack([I[:, a, b] for a, b in I_idx], axis=1) if I_idx else np.empty((I.shape[0], 0)))
        samples_J.append(np.stack([J[:, a, b] for a, b in J_idx], axis=1) if J_idx else np.empty((J.shape[0], 0)))
        samples_eta.append(np.stack([eta[:, z[0], z[1]] for z in sw], axis=1) if sw else np.empty((eta.shape[0], 0)))
    SI = np.concatenate(samples_I)
    SJ = np.concatenate(samples_J)
    SE = np.concatenate(samples_eta)
    R = len(seeds)

    cdf_I = stats.expon(scale=1.0 / alpha).cdf
    cdf_J = stats.expon(scale=1.0 / (1.0 - alpha)).cdf

    def frac_pass(rows, cdf):
        if rows.shape[1] < 2:
            return 1.0
        ok = [stats.kstest(r, cdf).pvalue >= ks_level for r in rows]
        return float(np.mean(ok))

    rep_I = frac_pass(SI, cdf_I)
    rep_J = frac_pass(SJ, cdf_J)
    cols = [(SI[:, k], cdf_I) for k in range(SI.shape[1])] + [(SJ[:, k], cdf_J) for k in range(SJ.shape[1])]
    edge_pass = float(np.mean([stats.kstest(c, f).pvalue >= ks_level for c, f in cols])) if cols else 1.0

    E = np.concatenate([SI, SJ], axis=1)
    bound = 4.0 / math.sqrt(R)
    max_ee = 0.0
    if E.shape[1] > 1:
        C = np.corrcoef(E, rowvar=False)
        off = C[~np.eye(C.shape[0], dtype=bool)]
        max_ee = float(np.max(np.abs(off)))
    max_eh = 0.0
    if SE.shape[1] and E.shape[1]:
        Ez = (E - E.mean(0)) / E.std(0)
        Hz = (SE - SE.mean(0)) / SE.std(0)
        max_eh = float(np.max(np.abs(Ez.T @ Hz / R)))
    rep = DownRightLawReport(
        replicas=R,
        n_I_edges=SI.shape[1],
        n_J_edges=SJ.shape[1],
        replica_ks_pass_I=rep_I,
        replica_ks_pass_J=rep_J,
        edge_ks_pass=edge_pass,
        max_edge_correlation=max_ee,
        max_edge_eta_correlation=max_eh,
        correlation_bound=bound,
        ks_level=ks_level,
    )
    rep.gates = {
        "replica_ks_I": rep_I >= replica_pass,
        "replica_ks_J": rep_J >= replica_pass,
        "edge_correlation": max_ee < bound,
        "edge_eta_correlation": max_eh < bound,
    }
    return rep
