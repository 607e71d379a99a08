"""Finite-horizon Busemann increments ``B_v(x, y) = G_{x,v} - G_{y,v}``.

One backward sweep toward the terminal v gives every ``G_{x,v}`` in the
window, hence both outgoing increments

    B1(x) = G_{x,v} - G_{x+e1,v},    B2(x) = G_{x,v} - G_{x+e2,v}.

Where ``x + e_i`` is not below v the increment is set to +inf.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .lattice import E1, E2, DomainError, DownRightPath, LatticeWindow, Site, leq, site
from .lpp import lpp_values_backward, planar_monotonicity_sweep, MonotonicityReport, _weights_on
from .stationary import alpha_of_direction, direction_of_alpha


def terminal_for(alpha: float, N: int) -> Site:
    """Lattice point nearest ``N * u(alpha)`` with ``|v|_1 = N`` exactly.

    Each coordinate is rounded half-up; any excess or deficit is taken
    from (or given to) the larger coordinate.
    """
    if N < 1:
        raise DomainError("N must be positive")
    u1 = direction_of_alpha(alpha)
    c = [math.floor(N * u1 + 0.5), math.floor(N * (1.0 - u1) + 0.5)]
    big = 0 if c[0] >= c[1] else 1
    c[big] += N - (c[0] + c[1])
    return Site(c[0], c[1])


def default_margin(N: int) -> int:
    return max(1, N // 4)


def margin_vector(v: Site, margin: int) -> Site:
    """Coordinatewise trust margin: ``margin`` l1-units spread along v's direction."""
    tot = v.x1 + v.x2
    if tot <= 0:
        return Site(margin, margin)
    u1 = v.x1 / tot
    return Site(max(1, math.ceil(margin * u1)), max(1, math.ceil(margin * (1.0 - u1))))


def busemann_arrays(Y: np.ndarray):
    """``(G, B1, B2)`` toward the far corner of ``Y``; leading axes are replicas."""
    G = lpp_values_backward(Y)
    B1 = np.full(G.shape, np.inf)
    B2 = np.full(G.shape, np.inf)
    B1[..., :-1, :] = G[..., :-1, :] - G[..., 1:, :]
    B2[..., :, :-1] = G[..., :, :-1] - G[..., :, 1:]
    return G, B1, B2


@dataclass(frozen=True)
class BusemannField:
    terminal: Site
    window: LatticeWindow
    B1: np.ndarray = field(repr=False)
    B2: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)
    G: np.ndarray = field(repr=False)
    margin: int = 1

    @property
    def trusted(self) -> LatticeWindow | None:
        hi = self.terminal - margin_vector(self.terminal - self.window.lo, self.margin)
        return LatticeWindow(self.window.lo, hi) if leq(self.window.lo, hi) else None

    def is_trusted(self, x) -> bool:
        t = self.trusted
        return t is not None and x in t

    def b1(self, x) -> float:
        return float(self.B1[self.window.index(x)])

    def b2(self, x) -> float:
        return float(self.B2[self.window.index(x)])

    def weight(self, x) -> float:
        return float(self.Y[self.window.index(x)])

    def passage(self, x) -> float:
        """``G_{x,v}``."""
        return float(self.G[self.window.index(x)])

    def increment(self, x, y) -> float:
        """``B_v(x, y)`` for any two window sites."""
        return self.passage(x) - self.passage(y)

    def on(self, sub: LatticeWindow):
        """``(B1, B2)`` arrays restricted to ``sub``."""
        sl = self.window.slices(sub)
        return self.B1[sl], self.B2[sl]


def busemann_from_terminal(weights, v, window: LatticeWindow, margin: int | None = None) -> BusemannField:
    v = site(v)
    if window.hi != v:
        raise DomainError(f"window must end at the terminal {v}, got {window.hi}")
    Y = _weights_on(weights, window)
    G, B1, B2 = busemann_arrays(Y)
    if margin is None:
        d = v - window.lo
        margin = default_margin(d.x1 + d.x2)
    return BusemannField(v, window, B1, B2, Y, G, int(margin))


def field_for_direction(weights, alpha: float, N: int, lo=None, margin: int | None = None) -> BusemannField:
    """Field with terminal ``v_N = terminal_for(alpha, N)`` on ``[lo, v_N]``
    (default ``lo`` = origin); the default margin is ``N // 4``."""
    v = terminal_for(alpha, N)
    lo = Site(0, 0) if lo is None else site(lo)
    return busemann_from_terminal(weights, v, LatticeWindow(lo, v), default_margin(N) if margin is None else margin)


@dataclass
class IdentityReport:
    name: str
    checked: int
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.max_residual <= self.tol


def check_recovery(bf: BusemannField, sub: LatticeWindow | None = None, tol: float = 1e-9) -> IdentityReport:
    """``Y_x = B1(x) ^ B2(x)`` wherever both neighbours lie below v."""
    sub = bf.window if sub is None else sub
    inner = sub.intersect(LatticeWindow(bf.window.lo, bf.terminal - (1, 1)))
    if inner is None:
        return IdentityReport("recovery", 0, 0.0, tol)
    b1, b2 = bf.on(inner)
    Y = bf.Y[bf.window.slices(inner)]
    r = np.abs(Y - np.minimum(b1, b2))
    return IdentityReport("recovery", r.size, float(r.max()), tol)


def check_cocycle(bf: BusemannField, n_paths: int = 100, seed: int = 0, tol: float = 1e-9) -> dict:
    """Unit-square closure everywhere plus path independence of sums of
    increments along random pairs of staircases."""
    B1, B2 = bf.B1, bf.B2
    lhs = B1[:-1, :-1] + B2[1:, :-1]
    rhs = B2[:-1, :-1] + B1[:-1, 1:]
    ok = np.isfinite(lhs) & np.isfinite(rhs)
    sq = IdentityReport("unit_square", int(ok.sum()), float(np.max(np.abs(lhs - rhs)[ok])) if ok.any() else 0.0, tol)

    rng = np.random.default_rng(seed)
    m, n = bf.window.shape
    worst = 0.0
    done = 0
    for _ in range(n_paths):
        a = np.array([rng.integers(0, m - 1), rng.integers(0, n - 1)])
        b = a + np.array([rng.integers(0, m - 1 - a[0] + 1), rng.integers(0, n - 1 - a[1] + 1)])
        sums = []
        for _k in range(2):
            steps = np.array([0] * (b[0] - a[0]) + [1] * (b[1] - a[1]))
            rng.shuffle(steps)
            p = a.copy()
            s = 0.0
            for st in steps:
                s += B1[p[0], p[1]] if st == 0 else B2[p[0], p[1]]
                p[st] += 1
            sums.append(s)
        direct = bf.G[a[0], a[1]] - bf.G[b[0], b[1]]
        worst = max(worst, abs(sums[0] - sums[1]), abs(sums[0] - direct))
        done += 1
    paths = IdentityReport("path_independence", done, worst, tol)
    return {"unit_square": sq, "path_independence": paths, "passed": sq.passed and paths.passed}


def shifted_mean_b1(seed: int, alpha: float, N: int, shifts, lo=(-8, -8), sample_radius: int = 8) -> np.ndarray:
    """Mean of B1 near the origin for fields built from hash keys shifted by
    each z in ``shifts``; stationarity says these agree in law."""
    from .weights import make_weight_field

    v = terminal_for(alpha, N)
    win = LatticeWindow(lo, v)
    out = []
    for z in shifts:
        w = make_weight_field(seed, win).shifted(z)
        bf = busemann_from_terminal(w, v, win, default_margin(N))
        box = LatticeWindow.box((0, 0), sample_radius).intersect(bf.trusted)
        out.append(float(bf.on(box)[0].mean()))
    return np.array(out)


def check_direction_monotonicity(weights, v_left, v_right, window: LatticeWindow, tol: float = 1e-9) -> MonotonicityReport:
    """Sitewise ordering of increments for two comparable terminals.

    ``v_right - v_left = d`` must satisfy ``d1 * d2 <= 0``; moving the
    terminal by +e1 or -e2 can only decrease B1 and increase B2.  Both
    fields use the common box ``[window.lo, max(v_left, v_right)]``.
    """
    vl, vr = site(v_left), site(v_right)
    d = vr - vl
    if d.x1 * d.x2 > 0:
        raise DomainError(f"terminals {vl} and {vr} are not comparable by e1/e2 chains")
    top = Site(max(vl.x1, vr.x1), max(vl.x2, vr.x2))
    big = LatticeWindow(window.lo, top)
    Y = _weights_on(weights, big)
    res = []
    for v in (vl, vr):
        sub = LatticeWindow(window.lo, v)
        res.append(busemann_arrays(Y[big.slices(sub)]))
    common = LatticeWindow(window.lo, Site(min(vl.x1, vr.x1), min(vl.x2, vr.x2)))
    (_, B1l, B2l), (_, B1r, B2r) = res
    sl = tuple(slice(0, k) for k in common.shape)
    B1l, B2l, B1r, B2r = B1l[sl], B2l[sl], B1r[sl], B2r[sl]
    # "left" terminal sits further in the e2 direction relative to "right"
    if d.x1 < 0 or d.x2 > 0:
        B1l, B2l, B1r, B2r = B1r, B2r, B1l, B2l
    ok1 = np.isfinite(B1l) & np.isfinite(B1r)
    ok2 = np.isfinite(B2l) & np.isfinite(B2r)
    v1 = np.count_nonzero(B1l[ok1] < B1r[ok1] - tol)
    v2 = np.count_nonzero(B2l[ok2] > B2r[ok2] + tol)
    checked = int(ok1.sum() + ok2.sum())
    viol = int(v1 + v2)
    return MonotonicityReport(viol == 0, checked, viol, {"terminals": (tuple(vl), tuple(vr))})


def check_planar_monotonicity_field(bf: BusemannField, tol: float = 1e-9) -> MonotonicityReport:
    return planar_monotonicity_sweep(bf.Y, bf.window, tol)


# ---------------------------------------------------------------- dual weights


@dataclass(frozen=True)
class DualWeightField:
    """Dual weights ``X_x = B(x-e1, x) ^ B(x-e2, x)`` on ``window`` and the
    reflected weights ``tildeY_x = X_{-x}`` on ``window.reflect()``."""

    window: LatticeWindow
    X: np.ndarray = field(repr=False)

    @property
    def reflected_window(self) -> LatticeWindow:
        return self.window.reflect()

    @property
    def tildeY(self) -> np.ndarray:
        return self.X[::-1, ::-1].copy()

    def x_at(self, x) -> float:
        return float(self.X[self.window.index(x)])

    def tilde_at(self, x) -> float:
        return self.x_at(-site(x))


def dual_window(bf: BusemannField) -> LatticeWindow:
    """Sites x with x - e1 and x - e2 both in the field window."""
    return LatticeWindow(bf.window.lo + (1, 1), bf.window.hi)


def sw_increments(bf: BusemannField, sub: LatticeWindow | None = None):
    """Incoming increments ``(B(x-e1, x), B(x-e2, x))`` over ``sub``."""
    dw = dual_window(bf)
    sub = dw if sub is None else sub
    if not dw.contains_window(sub):
        raise DomainError(f"{sub} reaches the lower edge of the field window")
    a1, b1 = bf.window.index(sub.lo - E1)
    a2, b2 = bf.window.index(sub.lo - E2)
    m, n = sub.shape
    return bf.B1[a1 : a1 + m, b1 : b1 + n], bf.B2[a2 : a2 + m, b2 : b2 + n]


def dual_weights(bf: BusemannField, sub: LatticeWindow | None = None) -> DualWeightField:
    sub = dual_window(bf) if sub is None else sub
    w1, w2 = sw_increments(bf, sub)
    return DualWeightField(sub, np.minimum(w1, w2))


def reflected_field(bf: BusemannField) -> BusemannField:
    """Cocycle of the reflected environment, ``tildeB(x, y) = B(-y, -x)``.

    Its outgoing increments are ``tildeB1(x) = B1(-x-e1)`` and
    ``tildeB2(x) = B2(-x-e2)``, and its recovered weights are ``tildeY``.
    Defined on the reflection of the dual window.
    """
    dw = dual_window(bf)
    w1, w2 = sw_increments(bf, dw)
    rwin = dw.reflect()
    B1 = w1[::-1, ::-1].copy()
    B2 = w2[::-1, ::-1].copy()
    Yt = np.minimum(B1, B2)
    # passage values of the reflected cocycle, anchored at the reflected terminal
    Gt = -bf.G[1:, 1:][::-1, ::-1] + bf.G[-1, -1]
    return BusemannField(-dw.lo, rwin, B1, B2, Yt, Gt, bf.margin)


# ------------------------------------------------------------- marginal stats


def staircase_samples(bf: BusemannField, center=(0, 0), half_steps: int = 50):
    """B1 on the e1-edges and B2 on the e2-edges of a staircase through
    ``center``; increments along a down-right path are independent in the limit."""
    path = DownRightPath.staircase(center, half_steps)
    s1, s2 = [], []
    for kind, x in path.edges():
        if kind == "I":
            s1.append(bf.b1(x - E1))
        else:
            s2.append(bf.b2(x - E2))
    return np.array(s1), np.array(s2)


def staircase_index(center, half_steps: int, lo: Site):
    """Array indices of the staircase samples inside a window starting at ``lo``."""
    path = DownRightPath.staircase(center, half_steps)
    i1, i2 = [], []
    for kind, x in path.edges():
        if kind == "I":
            i1.append(tuple(x - E1 - lo))
        else:
            i2.append(tuple(x - E2 - lo))
    return np.array(i1).T, np.array(i2).T


@dataclass
class MarginalReport:
    alpha: float
    N: int
    replicas: int
    mean_B1: float
    mean_B2: float
    se_B1: float
    se_B2: float
    ks_pass_B1: float
    ks_pass_B2: float
    ks_level: float
    samples_per_replica: int
    gates: dict = field(default_factory=dict)

    @property
    def target(self) -> tuple[float, float]:
        return (1.0 / self.alpha, 1.0 / (1.0 - self.alpha))

    @property
    def bias(self) -> tuple[float, float]:
        t1, t2 = self.target
        return (self.mean_B1 - t1, self.mean_B2 - t2)

    @property
    def passed(self) -> bool:
        return all(self.gates.values())


def marginal_statistics(
    alpha: float,
    N: int,
    replicas: int,
    seed: int = 1,
    half_steps: int = 50,
    ks_level: float = 0.05,
    mean_tol: float = 0.05,
    ks_pass: float = 0.90,
    chunk: int = 25,
) -> MarginalReport:
    """KS and mean checks of B1 ~ Exp(alpha), B2 ~ Exp(1 - alpha).

    Samples come from a staircase through the origin, at distance N from
    the terminal ``v_N``.  Replica r uses hash seed ``seed + r``.
    """
    from .weights import batch_weights

    v = terminal_for(alpha, N)
    r = (half_steps + 1) // 2 + 1
    lo = Site(-r, -r)
    if not leq(Site(r, r), v - margin_vector(v, default_margin(N))):
        raise DomainError("N too small for the sampling staircase to be trusted")
    win = LatticeWindow(lo, v)
    i1, i2 = staircase_index((0, 0), half_steps, lo)
    S1, S2 = [], []
    seeds = [seed + k for k in range(replicas)]
    for start in range(0, replicas, chunk):
        Y = batch_weights(seeds[start : start + chunk], win)
        _, B1, B2 = busemann_arrays(Y)
        S1.append(B1[:, i1[0], i1[1]])
        S2.append(B2[:, i2[0], i2[1]])
    S1 = np.concatenate(S1)
    S2 = np.concatenate(S2)
    cdf1 = stats.expon(scale=1.0 / alpha).cdf
    cdf2 = stats.expon(scale=1.0 / (1.0 - alpha)).cdf
    p1 = np.array([stats.kstest(s, cdf1).pvalue for s in S1])
    p2 = np.array([stats.kstest(s, cdf2).pvalue for s in S2])
    m1 = S1.mean(axis=1)
    m2 = S2.mean(axis=1)
    rep = MarginalReport(
        alpha=alpha,
        N=N,
        replicas=replicas,
        mean_B1=float(m1.mean()),
        mean_B2=float(m2.mean()),
        se_B1=float(m1.std(ddof=1) / math.sqrt(replicas)) if replicas > 1 else float("nan"),
        se_B2=float(m2.std(ddof=1) / math.sqrt(replicas)) if replicas > 1 else float("nan"),
        ks_pass_B1=float(np.mean(p1 >= ks_level)),
        ks_pass_B2=float(np.mean(p2 >= ks_level)),
        ks_level=ks_level,
        samples_per_replica=S1.shape[1],
    )
    t1, t2 = rep.target
    rep.gates = {
        "mean_B1": abs(rep.mean_B1 - t1) <= mean_tol * t1,
        "mean_B2": abs(rep.mean_B2 - t2) <= mean_tol * t2,
        "ks_B1": rep.ks_pass_B1 >= ks_pass,
        "ks_B2": rep.ks_pass_B2 >= ks_pass,
    }
    return rep


def bias_ladder(alpha: float, Ns, replicas: int, seed: int = 1) -> list[dict]:
    """Mean-increment bias as a function of the horizon N."""
    out = []
    for N in Ns:
        r = marginal_statistics(alpha, N, replicas, seed)
        out.append({"N": N, "bias_B1": r.bias[0], "bias_B2": r.bias[1], "se_B1": r.se_B1, "se_B2": r.se_B2})
    return out
