"""Monte Carlo experiments with machine-readable pass/fail gates.

Every experiment is a pure function of its arguments: replica r of an
experiment with base seed s reads the hash environment ``s + r``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .busemann import busemann_arrays, default_margin, margin_vector, terminal_for
from .lattice import DomainError, LatticeWindow, Site, leq
from .lpp import lpp_values, lpp_values_backward, shape_function, shape_gradient
from .stationary import direction_of_alpha
from .stats import BLOCK, binomial_se, block_bootstrap_se, within
from .trees import CLASSES, classes_from_arrows, cluster_sizes, survival
from .weights import LANE_ORACLE, batch_weights, exp_field


@dataclass
class ExperimentConfig:
    experiment: str = "first_step"
    alpha: float = 0.5
    N: int = 400
    replicas: int = 200
    seed: int = 1
    block: int = BLOCK
    thresholds: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.N < 4:
            raise DomainError(f"N must be at least 4, got {self.N}")
        if self.replicas < 1:
            raise DomainError(f"replicas must be positive, got {self.replicas}")
        if self.block < 1:
            raise DomainError(f"block must be positive, got {self.block}")


@dataclass
class Report:
    name: str
    config: dict
    results: dict
    gates: dict

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.gates.values())

    def to_dict(self) -> dict:
        return _plain(asdict(self) | {"passed": self.passed})


def _plain(obj):
    """Recursively convert numpy scalars/arrays for JSON."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _seeds(seed: int, count: int, start: int = 0) -> list[int]:
    return [seed + start + k for k in range(count)]


# ------------------------------------------------------------ shape theorem


def shape_gaps(N: int, seeds) -> np.ndarray:
    """``max_{|x|_1 = N} |G_{0,x} - g(x)| / N`` for each seed."""
    win = LatticeWindow((0, 0), (N, N))
    a = np.arange(N + 1)
    g = np.array([shape_function(float(i), float(N - i)) for i in a])
    out = []
    for s in seeds:
        G = lpp_values(batch_weights([s], win)[0])
        out.append(np.max(np.abs(G[a, N - a] - g)) / N)
    return np.array(out)


def run_shape_convergence(sizes=(100, 1000), seeds=20, seed: int = 1, gate: float = 0.15, paired: float = 0.9) -> Report:
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise DomainError("sizes must be ascending")
    ss = _seeds(seed, seeds)
    gaps = {N: shape_gaps(N, ss) for N in sizes}
    med = [float(np.median(gaps[N])) for N in sizes]
    frac = float(np.mean(gaps[sizes[-1]] < gaps[sizes[0]])) if len(sizes) > 1 else 1.0
    results = {
        "sizes": sizes,
        "gaps": {str(N): gaps[N] for N in sizes},
        "median_gap": med,
        "max_gap_largest": float(gaps[sizes[-1]].max()),
        "paired_decrease_fraction": frac,
    }
    gates = {
        "gap_largest_below": results["max_gap_largest"] < gate,
        "paired_decrease": frac >= paired,
        "median_nonincreasing": all(b <= a for a, b in zip(med, med[1:])),
    }
    return Report("shape", {"sizes": sizes, "seeds": seeds, "seed": seed, "gate": gate}, results, gates)


# --------------------------------------------------------- sampling layout


@dataclass(frozen=True)
class SegmentLayout:
    """Short antidiagonal segments centred on the ray ``-t u`` behind the origin.

    Arrow sites of segment k are ``c_k + (j, -j - 1)`` for
    ``-W - 1 <= j <= W``; the classified points are ``c_k + (j, -j)``.
    Keeping W small next to ``min(v)`` keeps every site's direction to the
    terminal close to u.
    """

    terminal: Site
    lo: Site
    centers: tuple[Site, ...]
    half_width: int

    @property
    def window(self) -> LatticeWindow:
        return LatticeWindow(self.lo, self.terminal)

    @property
    def row_length(self) -> int:
        return 2 * self.half_width + 2

    def arrow_index(self):
        W = self.half_width
        j = np.arange(-W - 1, W + 1)
        a = np.stack([c.x1 + j - self.lo.x1 for c in self.centers])
        b = np.stack([c.x2 - j - 1 - self.lo.x2 for c in self.centers])
        return a, b


def segment_layout(alpha: float, N: int, half_width: int | None = None, levels: int = 16, spacing: int | None = None) -> SegmentLayout:
    v = terminal_for(alpha, N)
    W = min(16, max(1, min(v.x1, v.x2) // 16)) if half_width is None else half_width
    spacing = 2 * W + 2 if spacing is None else spacing
    u1 = v.x1 / N
    centers = tuple(Site(-round(k * spacing * u1), -round(k * spacing * (1.0 - u1))) for k in range(levels))
    lo = Site(min(c.x1 for c in centers) - W - 2, min(c.x2 for c in centers) - W - 2)
    top = Site(max(c.x1 for c in centers) + W + 1, max(c.x2 for c in centers) + W + 1)
    if not leq(top, v - margin_vector(v, default_margin(N))):
        raise DomainError(f"segments of half-width {W} are not trusted at N={N}")
    return SegmentLayout(v, lo, centers, W)


CHUNK_CELLS = 4_000_000


def chunk_size(window: LatticeWindow, cells: int = CHUNK_CELLS) -> int:
    """Replicas per batched sweep so one batch holds about ``cells`` sites."""
    return max(1, cells // window.area)


def segment_arrows(layout: SegmentLayout, seeds, chunk: int | None = None) -> np.ndarray:
    """Boolean e1-arrows of shape ``(len(seeds), levels, 2W + 2)``."""
    a, b = layout.arrow_index()
    out = []
    seeds = list(seeds)
    chunk = chunk or chunk_size(layout.window)
    for s in range(0, len(seeds), chunk):
        Y = batch_weights(seeds[s : s + chunk], layout.window)
        _, B1, B2 = busemann_arrays(Y)
        A = B1 <= B2
        out.append(A[:, a, b])
    return np.concatenate(out)


def geodesic_e1_density(is_e1: np.ndarray, start, steps: int) -> float:
    a, b = start
    m, n = is_e1.shape
    e1 = 0
    done = 0
    for _ in range(steps):
        if a >= m - 1 and b >= n - 1:
            break
        if is_e1[a, b]:
            a += 1
            e1 += 1
        else:
            b += 1
        done += 1
    return e1 / done if done else float("nan")


# -------------------------------------------------------------- first step


def run_first_step(alpha: float, N: int = 400, replicas: int = 200, seed: int = 1, block: int = BLOCK, geodesic_steps: int | None = None) -> Report:
    """Frequency of e1-arrows on trusted antidiagonal segments versus alpha,
    and the density of e1-steps along geodesics from the origin versus u1."""
    layout = segment_layout(alpha, N)
    seeds = _seeds(seed, replicas)
    A = segment_arrows(layout, seeds)
    # one row per field; blocks run over consecutive segments
    rows = A.reshape(A.shape[0], -1).astype(float)
    freq = float(rows.mean())
    se = block_bootstrap_se(rows, block, seed=seed)
    naive = float(rows.std() / math.sqrt(rows.size))

    steps = geodesic_steps or N // 2
    v = layout.terminal
    win = LatticeWindow((0, 0), v)
    dens = []
    ch = chunk_size(win)
    for s in range(0, replicas, ch):
        Y = batch_weights(seeds[s : s + ch], win)
        _, B1, B2 = busemann_arrays(Y)
        for A1 in B1 <= B2:
            dens.append(geodesic_e1_density(A1, (0, 0), steps))
    dens = np.array(dens)
    u1 = direction_of_alpha(alpha)
    dmean = float(dens.mean())
    dse = float(dens.std(ddof=1) / math.sqrt(len(dens))) if len(dens) > 1 else float("nan")
    results = {
        "arrow_frequency_e1": freq,
        "arrow_se_block": se,
        "arrow_se_naive": naive,
        "effective_sample_size": float(freq * (1 - freq) / se**2) if se > 0 else float("inf"),
        "n_sites": int(rows.size),
        "target_alpha": alpha,
        "geodesic_e1_density": dmean,
        "geodesic_se": dse,
        "target_u1": u1,
        "geodesic_steps": steps,
    }
    gates = {
        "arrow_frequency": within(freq, alpha, se),
        "geodesic_density": within(dmean, u1, dse),
    }
    cfg = {"alpha": alpha, "N": N, "replicas": replicas, "seed": seed, "block": block}
    return Report("first_step", cfg, results, gates)


# ------------------------------------------------------------- Markov chain


def markov_target(alpha: float) -> np.ndarray:
    """Transition matrix over (s, c, h, v)."""
    a, b = alpha, 1.0 - alpha
    return np.array([[0, b, a, 0], [a, 0, 0, b], [0, b, a, 0], [a, 0, 0, b]], dtype=float)


def invariant_target(alpha: float) -> np.ndarray:
    a, b = alpha, 1.0 - alpha
    return np.array([a * b, a * b, a * a, b * b])


def transition_counts(codes: np.ndarray) -> np.ndarray:
    """4x4 counts of consecutive code pairs along the last axis."""
    c = codes.reshape(-1, codes.shape[-1])
    pairs = c[:, :-1] * 4 + c[:, 1:]
    return np.bincount(pairs.ravel(), minlength=16).reshape(4, 4)


def _row_normalize(counts: np.ndarray) -> np.ndarray:
    tot = counts.sum(axis=1, keepdims=True)
    return np.divide(counts, tot, out=np.zeros(counts.shape), where=tot > 0)


@dataclass
class MarkovReport:
    alpha: float
    counts: np.ndarray
    frequencies: np.ndarray
    target: np.ndarray
    invariant: np.ndarray
    invariant_se: np.ndarray
    invariant_target: np.ndarray
    max_abs_deviation: float
    chain_length: int
    gates: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.gates.values())

    def to_dict(self) -> dict:
        return _plain(asdict(self) | {"passed": self.passed, "states": list(CLASSES)})


def markov_report(codes: np.ndarray, alpha: float, block: int = BLOCK, tol: float = 0.02, seed: int = 0) -> MarkovReport:
    counts = transition_counts(codes)
    freq = _row_normalize(counts)
    target = markov_target(alpha)
    # one row per independent replica for the bootstrap
    rows = codes.reshape(codes.shape[0], -1)
    inv = np.array([(rows == k).mean() for k in range(4)])
    inv_se = np.array([block_bootstrap_se((rows == k).astype(float), block, seed=seed) for k in range(4)])
    mu = invariant_target(alpha)
    dev = float(np.max(np.abs(freq - target)))
    rep = MarkovReport(alpha, counts, freq, target, inv, inv_se, mu, dev, int(rows.size))
    rep.gates = {
        "matrix_within_tol": dev <= tol,
        "invariant_within_3se": bool(np.all(np.abs(inv - mu) <= 3 * inv_se)),
        "rows_sum_to_one": bool(np.allclose(freq.sum(axis=1)[counts.sum(axis=1) > 0], 1.0)),
    }
    return rep


def bernoulli_chain(alpha: float, length: int, seed: int, row: int = 64) -> np.ndarray:
    """Oracle: i.i.d. arrows a_j ~ Bernoulli(alpha) relabelled to classes."""
    rng = np.random.default_rng([seed, 0xB0])
    n_rows = -(-length // (row - 1))
    a = rng.random((n_rows, row)) < alpha
    return classes_from_arrows(a)


def run_markov_chain(alpha: float, N: int = 400, chain_length: int = 100_000, seed: int = 1, block: int = BLOCK, tol: float = 0.02) -> dict:
    """Empirical {s,c,h,v} chain along antidiagonals and the Bernoulli oracle."""
    layout = segment_layout(alpha, N, levels=32)
    per_field = len(layout.centers) * (2 * layout.half_width + 1)
    fields = -(-chain_length // per_field)
    A = segment_arrows(layout, _seeds(seed, fields))
    codes = classes_from_arrows(A)
    emp = markov_report(codes, alpha, block, tol, seed)
    oracle = markov_report(bernoulli_chain(alpha, chain_length, seed), alpha, block, tol, seed)
    cfg = {"alpha": alpha, "N": N, "chain_length": chain_length, "fields": fields, "seed": seed, "block": block, "tol": tol}
    gates = {f"empirical_{k}": v for k, v in emp.gates.items()} | {f"oracle_{k}": v for k, v in oracle.gates.items()}
    return {"name": "markov", "config": cfg, "empirical": emp.to_dict(), "oracle": oracle.to_dict(), "gates": gates, "passed": all(gates.values())}


def run_source_scan(alphas, N: int = 200, fields: int = 20, seed: int = 1) -> Report:
    """Empirical density of sources across directions; the maximum should
    sit at the grid point nearest the diagonal."""
    dens = []
    for a in alphas:
        layout = segment_layout(a, N)
        codes = classes_from_arrows(segment_arrows(layout, _seeds(seed, fields)))
        dens.append(float((codes == 0).mean()))
    alphas = list(alphas)
    best = alphas[int(np.argmax(dens))]
    nearest = min(alphas, key=lambda a: abs(a - 0.5))
    return Report("source_scan", {"alphas": alphas, "N": N, "fields": fields, "seed": seed}, {"source_density": dens, "argmax_alpha": best}, {"max_at_diagonal": best == nearest})


# ---------------------------------------------------------------- midpoint


def midpoint_hits(alpha: float, n: int, seeds, shift=(0, 0), chunk: int | None = None) -> np.ndarray:
    """Whether 0 lies on the geodesic from ``-v_n`` to ``v_n`` per seed."""
    v = terminal_for(alpha, n)
    win = LatticeWindow(-v, v)
    chunk = chunk or chunk_size(win)
    x1, x2 = win.coords()
    z = win.index((0, 0))
    out = []
    seeds = list(seeds)
    for s in range(0, len(seeds), chunk):
        Y = np.stack([exp_field(q, x1 + shift[0], x2 + shift[1]) for q in seeds[s : s + chunk]])
        F = lpp_values(Y)
        B = lpp_values_backward(Y)
        through = F[:, z[0], z[1]] + B[:, z[0], z[1]] - Y[:, z[0], z[1]]
        total = F[:, -1, -1]
        out.append(np.abs(total - through) <= 1e-9 * np.abs(total))
    return np.concatenate(out)


def midpoint_oracle_n2(samples: int, seed: int) -> tuple[float, float]:
    """Enumerate all 6 paths across a 3x3 block of independent Exp(1)
    weights and count how often the best one visits the centre."""
    rng = np.random.default_rng([seed, LANE_ORACLE])
    Y = rng.exponential(size=(samples, 3, 3))
    best = np.full(samples, -np.inf)
    hit = np.zeros(samples, dtype=bool)
    for e1_pos in itertools.combinations(range(4), 2):
        a = b = 0
        s = Y[:, 0, 0].copy()
        center = False
        for k in range(4):
            if k in e1_pos:
                a += 1
            else:
                b += 1
            s += Y[:, a, b]
            center |= (a, b) == (1, 1)
        better = s > best
        best = np.where(better, s, best)
        hit = np.where(better, center, hit)
    p = float(hit.mean())
    return p, binomial_se(p, samples)


def run_midpoint(alpha: float = 0.5, n_list=(20, 80, 320), replicas: int = 100, batches: int = 20, seed: int = 1, oracle_samples: int = 200_000, check_shift=(7, -3)) -> Report:
    n_list = list(n_list)
    P = np.zeros((batches, len(n_list)))
    for i, n in enumerate(n_list):
        hits = midpoint_hits(alpha, n, _seeds(seed, replicas * batches))
        P[:, i] = hits.reshape(batches, replicas).mean(axis=1)
    strictly = np.all(np.diff(P, axis=1) < 0, axis=1)
    pooled = P.mean(axis=0)
    # n = 2 along the diagonal: DP hits versus path enumeration on a separate RNG
    mc2 = midpoint_hits(0.5, 2, _seeds(seed, oracle_samples // 4))
    p2 = float(mc2.mean())
    se2 = binomial_se(p2, mc2.size)
    po, seo = midpoint_oracle_n2(oracle_samples, seed)
    # translation covariance at the smallest n
    n0 = n_list[0]
    base = midpoint_hits(alpha, n0, _seeds(seed, replicas * batches))
    moved = midpoint_hits(alpha, n0, _seeds(seed, replicas * batches), shift=check_shift)
    pb, pm = float(base.mean()), float(moved.mean())
    se_shift = math.hypot(binomial_se(pb, base.size), binomial_se(pm, moved.size))
    results = {
        "n_list": n_list,
        "pooled_probability": pooled,
        "batch_probabilities": P,
        "strictly_decreasing_fraction": float(strictly.mean()),
        "n2_dp": p2,
        "n2_dp_se": se2,
        "n2_oracle": po,
        "n2_oracle_se": seo,
        "shift_base": pb,
        "shift_moved": pm,
    }
    gates = {
        "decreasing_batches": float(strictly.mean()) >= 0.9,
        "halved_at_largest": pooled[-1] < 0.5 * pooled[0],
        "n2_matches_oracle": within(p2, po, math.hypot(se2, seo)),
        "translation": within(pm, pb, se_shift),
    }
    cfg = {"alpha": alpha, "n_list": n_list, "replicas": replicas, "batches": batches, "seed": seed}
    return Report("midpoint", cfg, results, gates)


# --------------------------------------------------------- arrow stability


def run_arrow_stability(alpha: float = 0.5, N: int = 200, factor: float = 2.0, replicas: int = 50, seed: int = 1, bins: int = 10, level: float = 0.95) -> Report:
    """Arrow agreement between horizons N and factor*N as a function of the
    l1 distance to v_N; the smallest distance from which agreement stays
    above ``level`` is the suggested trust margin."""
    if not factor > 1:
        raise DomainError("factor must exceed 1")
    v = terminal_for(alpha, N)
    w = terminal_for(alpha, int(round(factor * N)))
    lo = Site(0, 0)
    big = LatticeWindow(lo, Site(max(v.x1, w.x1), max(v.x2, w.x2)))
    small = LatticeWindow(lo, v)
    m, n = v.x1, v.x2  # sites with x + e1, x + e2 <= v
    x1, x2 = small.coords()
    dist = ((v.x1 - x1) + (v.x2 - x2))[:m, :n]
    edges = np.linspace(0, dist.max() + 1, bins + 1)
    agree = np.zeros(bins)
    count = np.zeros(bins)
    hi = v - margin_vector(v, default_margin(N))
    center = Site(hi.x1 // 2, hi.x2 // 2)  # centre of the trusted window [0, hi]
    center_dist = (v.x1 - center.x1) + (v.x2 - center.x2)
    on_center = dist == center_dist
    c_agree = c_count = 0
    seeds = _seeds(seed, replicas)
    ch = chunk_size(big)
    for s in range(0, replicas, ch):
        Y = batch_weights(seeds[s : s + ch], big)
        _, B1n, B2n = busemann_arrays(Y[:, : v.x1 + 1, : v.x2 + 1])
        Yw = Y[:, : w.x1 + 1, : w.x2 + 1]
        _, B1w, B2w = busemann_arrays(Yw)
        An = (B1n <= B2n)[:, :m, :n]
        Aw = (B1w <= B2w)[:, :m, :n]
        same = (An == Aw)
        idx = np.clip(np.digitize(dist, edges) - 1, 0, bins - 1)
        for k in range(bins):
            sel = idx == k
            agree[k] += same[:, sel].sum()
            count[k] += same[:, sel].size
        c_agree += same[:, on_center].sum()
        c_count += same[:, on_center].size
    frac = np.divide(agree, count, out=np.full(bins, np.nan), where=count > 0)
    centers = 0.5 * (edges[1:] + edges[:-1])
    margin = None
    for k in range(bins):
        tail = frac[k:][count[k:] > 0]
        if tail.size and np.all(tail >= level):
            margin = float(edges[k])
            break
    center_frac = c_agree / c_count
    # sites inside one field are dependent; count each field once
    se = np.sqrt(frac * (1 - frac) / replicas)
    ok = count > 0
    f, e = frac[ok], se[ok]
    rising = bool(f[-1] > f[0] and np.all(np.diff(f) >= -3 * np.hypot(e[1:], e[:-1])))
    results = {"distance_bins": centers, "agreement": frac, "agreement_se": se, "counts": count, "suggested_margin": margin, "center": list(center), "center_distance": center_dist, "center_agreement": float(center_frac)}
    gates = {"center_agreement": center_frac > level, "agreement_rises_with_distance": rising}
    return Report("arrow_stability", {"alpha": alpha, "N": N, "factor": factor, "replicas": replicas, "seed": seed}, results, gates)


# -------------------------------------------------------- coalescence proxy


def horizon_for_box(alpha: float, side: int) -> int:
    """Smallest N whose trusted window from the origin contains ``[0, side-1]^2``."""
    N = 2 * side
    while True:
        v = terminal_for(alpha, N)
        hi = v - margin_vector(v, default_margin(N))
        if hi.x1 >= side - 1 and hi.x2 >= side - 1:
            return N
        N += max(1, N // 50)


def run_coalescence(alpha: float = 0.5, trials: int = 200, side: int = 400, seed: int = 1, start=(2, 2), ks=(10, 100, 1000), cluster_fields: int = 5) -> Report:
    """Adjacent starts ``x, x + e2`` must meet inside the trusted box; also
    the survival function of backward-cluster sizes."""
    N = horizon_for_box(alpha, side)
    v = terminal_for(alpha, N)
    win = LatticeWindow((0, 0), v)
    met = []
    meet_levels = []
    sx, sy = start
    for s in _seeds(seed, trials):
        _, B1, B2 = busemann_arrays(batch_weights([s], win)[0])
        A = (B1 <= B2)[:side, :side]
        p, q = [sx, sy], [sx, sy + 1]
        ok = False
        while True:
            if p == q:
                ok = True
                break
            mover = p if p[0] + p[1] <= q[0] + q[1] else q
            if A[mover[0], mover[1]]:
                mover[0] += 1
            else:
                mover[1] += 1
            if mover[0] >= side or mover[1] >= side:
                break
        met.append(ok)
        meet_levels.append(p[0] + p[1] if ok else -1)
    met = np.array(met)
    surv_all = []
    for s in _seeds(seed + 10**6, cluster_fields):
        _, B1, B2 = busemann_arrays(batch_weights([s], win)[0])
        S, T = cluster_sizes((B1 <= B2)[:side, :side])
        cut = side // 4
        surv_all.append(survival(S[cut:, cut:], T[cut:, cut:], ks))
    surv = {k: float(np.mean([d[k] for d in surv_all])) for k in ks}
    vals = [surv[k] for k in ks]
    results = {
        "N": N,
        "coalesced_fraction": float(met.mean()),
        "median_meeting_level": float(np.median([m for m in meet_levels if m >= 0])) if met.any() else None,
        "cluster_survival": surv,
    }
    gates = {
        "coalescence": float(met.mean()) >= 0.95,
        "survival_decreasing": all(b < a for a, b in zip(vals, vals[1:])),
    }
    return Report("coalescence", {"alpha": alpha, "trials": trials, "side": side, "seed": seed}, results, gates)


# ------------------------------------------------------ ergodic diagnostic


def run_ergodic_diagnostic(alpha: float = 0.5, N: int = 400, n_list=(10, 20, 40, 80), replicas: int = 10, seed: int = 1) -> Report:
    """``max_{|x|_1 <= n} |B(0, x) - grad g(u) . x| / n`` for a ladder of n.
    Reported only; there is no rate to gate on."""
    v = terminal_for(alpha, N)
    r = max(n_list)
    win = LatticeWindow((-r, -r), v)
    grad = shape_gradient(v.x1, v.x2)
    x1, x2 = win.coords()
    z = win.index((0, 0))
    vals = {n: [] for n in n_list}
    for s in _seeds(seed, replicas):
        G = lpp_values_backward(batch_weights([s], win)[0])
        B0 = G[z] - G
        lin = grad[0] * x1 + grad[1] * x2
        dev = np.abs(B0 - lin)
        l1 = np.abs(x1) + np.abs(x2)
        for n in n_list:
            vals[n].append(float(dev[l1 <= n].max() / n))
    out = {str(n): float(np.mean(vals[n])) for n in n_list}
    return Report("ergodic", {"alpha": alpha, "N": N, "n_list": list(n_list), "replicas": replicas, "seed": seed}, {"scaled_deviation": out}, {})
