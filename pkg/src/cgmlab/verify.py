"""Per-module verification runs used by the command-line front end.

Each ``check_*`` takes a :class:`RunConfig` and returns a plain dict with a
``gates`` mapping; all of them are deterministic in the config.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .busemann import (
    check_cocycle,
    check_direction_monotonicity,
    check_recovery,
    field_for_direction,
    marginal_statistics,
    terminal_for,
)
from .competition import (
    boundary_lpp_minus,
    boundary_lpp_plus,
    check_separation,
    competition_interface_plus,
    interface_minus_from,
    maximizing_path,
)
from .config import RunConfig
from .experiments import (
    _plain,
    run_coalescence,
    run_first_step,
    run_markov_chain,
    run_midpoint,
    run_shape_convergence,
)
from .lattice import DownRightPath, LatticeWindow, Site
from .lpp import backtrack_geodesic, brute_force_lpp, forward_lpp, planar_monotonicity_sweep
from .stationary import (
    build_stationary_batch,
    check_downright_law,
    stationary_lpp_batch,
    structure_residuals,
)
from .trees import (
    arrow_field,
    check_arrow_identities,
    check_dual_consistency,
    check_noncrossing,
    check_xor_duality,
    dual_arrows_from_southwest,
    southwest_arrows,
    trace,
)
from .weights import ArrayWeights, make_weight_field


def _out(name: str, results: dict, gates: dict) -> dict:
    gates = {k: bool(v) for k, v in gates.items()}
    return _plain({"name": name, "results": results, "gates": gates, "passed": all(gates.values())})


def check_lpp(cfg: RunConfig, seeds: int = 100, max_side: int = 5) -> dict:
    """Forward DP against path enumeration on every window up to 5x5."""
    worst = 0.0
    path_mismatch = 0
    cases = 0
    for s in range(cfg.seed, cfg.seed + seeds):
        big = make_weight_field(s, LatticeWindow((0, 0), (max_side - 1, max_side - 1)))
        for m, n in itertools.product(range(1, max_side + 1), repeat=2):
            win = LatticeWindow((0, 0), (m - 1, n - 1))
            w = ArrayWeights(big.on(win), win)
            t = forward_lpp(w, win.lo, win)
            val, path = brute_force_lpp(w, win.lo, win.hi)
            worst = max(worst, abs(t[win.hi] - val) / abs(val))
            path_mismatch += backtrack_geodesic(t, win.lo, win.hi).sites != path.sites
            cases += 1
    mono = [planar_monotonicity_sweep(make_weight_field(s, LatticeWindow((0, 0), (29, 29))), LatticeWindow((0, 0), (29, 29))) for s in range(cfg.seed, cfg.seed + 3)]
    res = {"cases": cases, "max_relative_error": worst, "path_mismatches": path_mismatch, "monotonicity_checks": sum(r.checked for r in mono), "monotonicity_violations": sum(r.violations for r in mono)}
    return _out("lpp", res, {"oracle_values": worst <= 1e-9, "oracle_paths": path_mismatch == 0, "planar_monotonicity": all(r.passed for r in mono)})


def check_stationary(cfg: RunConfig, size: int = 200, systems: int = 5, mean_replicas: int = 2000) -> dict:
    a = cfg.alpha
    z, I, J, eta = build_stationary_batch(a, range(cfg.seed, cfg.seed + systems), size, size)
    G = stationary_lpp_batch(z, I, J)
    rep = structure_residuals(z, I, J, eta, G)
    z, I, J, _ = build_stationary_batch(a, range(cfg.seed, cfg.seed + mean_replicas), 50, 50)
    g = stationary_lpp_batch(z, I, J)[:, 50, 50]
    target = 50 / a + 50 / (1 - a)
    se = float(g.std(ddof=1) / math.sqrt(g.size))
    law = check_downright_law(a, DownRightPath.staircase((30, 30), 20), range(cfg.seed, cfg.seed + 500), (60, 60))
    res = {
        "max_structural_residual": rep.max_residual,
        "max_increment_residual": rep.max_increment_residual,
        "relative_increment_residual": rep.relative_increment_residual,
        "mean_G50": float(g.mean()),
        "target_G50": target,
        "se_G50": se,
        "downright_ks_pass_I": law.replica_ks_pass_I,
        "downright_ks_pass_J": law.replica_ks_pass_J,
        "max_edge_correlation": law.max_edge_correlation,
        "max_edge_eta_correlation": law.max_edge_eta_correlation,
    }
    gates = {"structure_exact": rep.passed(1e-12), "mean_G50": abs(g.mean() - target) <= 3 * se} | {f"downright_{k}": v for k, v in law.gates.items()}
    return _out("stationary", res, gates)


def _field(cfg: RunConfig, seed: int, lo=(0, 0)):
    v = terminal_for(cfg.alpha, cfg.n)
    w = make_weight_field(seed, LatticeWindow(lo, v))
    return w, field_for_direction(w, cfg.alpha, cfg.n, lo=lo)


def check_busemann(cfg: RunConfig, seeds: int = 5) -> dict:
    worst = {"recovery": 0.0, "unit_square": 0.0, "path_independence": 0.0}
    mono_ok = True
    for s in range(cfg.seed, cfg.seed + seeds):
        w, bf = _field(cfg, s)
        worst["recovery"] = max(worst["recovery"], check_recovery(bf, bf.trusted).max_residual)
        c = check_cocycle(bf, n_paths=20, seed=s)
        worst["unit_square"] = max(worst["unit_square"], c["unit_square"].max_residual)
        worst["path_independence"] = max(worst["path_independence"], c["path_independence"].max_residual)
        v = bf.terminal
        box = LatticeWindow((0, 0), (min(39, v.x1 - 2), min(39, v.x2 - 2)))
        for d in ((1, 0), (0, -1)):
            top = box.hi + (1, 1)
            mono_ok &= check_direction_monotonicity(w, top, top + d, box).passed
    marg = marginal_statistics(cfg.alpha, cfg.n, min(cfg.replicas, 100), cfg.seed)
    res = worst | {"mean_B1": marg.mean_B1, "mean_B2": marg.mean_B2, "ks_pass_B1": marg.ks_pass_B1, "ks_pass_B2": marg.ks_pass_B2}
    gates = {k: v <= 1e-9 for k, v in worst.items()} | {"direction_monotonicity": mono_ok} | marg.gates
    return _out("busemann", res, gates)


def check_trees(cfg: RunConfig, seeds: int = 5, side: int = 60) -> dict:
    out = {"arrow_weight": 0.0, "sw_arrow_weight": 0.0, "geodesic_weight": 0.0, "xor_checked": 0, "xor_violations": 0, "dual_mismatch": 0, "crossing_pairs": 0}
    for s in range(cfg.seed, cfg.seed + seeds):
        _, bf = _field(cfg, s, lo=(-2, -2))
        # skewed directions leave a narrow trusted strip; shrink the box to fit
        side = min(side, *bf.trusted.hi)
        box = LatticeWindow((0, 0), (side - 1, side - 1))
        A = arrow_field(bf, box)
        S = southwest_arrows(bf, box.shift((1, 1)))
        D = dual_arrows_from_southwest(S)
        rng = np.random.default_rng(s)
        starts = [box.site_at(*rng.integers(0, side // 2, 2)) for _ in range(50)]
        ids = check_arrow_identities(bf, A, S, starts, length=40)
        for k in ("arrow_weight", "sw_arrow_weight", "geodesic_weight"):
            out[k] = max(out[k], ids[k])
        x = check_xor_duality(A, D)
        out["xor_checked"] += x["checked"]
        out["xor_violations"] += x["violations"]
        out["dual_mismatch"] += check_dual_consistency(A, D)[1]
        out["crossing_pairs"] += check_noncrossing(A, D, pairs=20, seed=s)["crossing_pairs"]
    co = run_coalescence(cfg.alpha, trials=min(cfg.replicas, 200), side=400, seed=cfg.seed)
    out |= {"coalesced_fraction": co.results["coalesced_fraction"], "cluster_survival": co.results["cluster_survival"]}
    gates = {
        "exact_identities": max(out["arrow_weight"], out["sw_arrow_weight"], out["geodesic_weight"]) <= 1e-9,
        "xor_duality": out["xor_violations"] == 0 and out["dual_mismatch"] == 0,
        "noncrossing": out["crossing_pairs"] == 0,
    } | co.gates
    return _out("trees", out, gates)


def check_first_step(cfg: RunConfig) -> dict:
    r = run_first_step(cfg.alpha, cfg.n, min(cfg.replicas, 100), cfg.seed, cfg.block)
    return _out("first_step", r.results, r.gates)


def check_markov(cfg: RunConfig) -> dict:
    r = run_markov_chain(cfg.alpha, cfg.n, cfg.length, cfg.seed, cfg.block)
    return _out("markov", {"config": r["config"], "empirical": r["empirical"], "oracle": r["oracle"]}, r["gates"])


def check_classify(cfg: RunConfig) -> dict:
    r = run_markov_chain(cfg.alpha, cfg.n, min(cfg.length, 20_000), cfg.seed, cfg.block)
    emp = r["empirical"]
    res = {"states": emp["states"], "frequencies": emp["invariant"], "se": emp["invariant_se"], "target": emp["invariant_target"]}
    return _out("classify", res, {"invariant_within_3se": r["gates"]["empirical_invariant_within_3se"]})


def check_midpoint(cfg: RunConfig, batches: int = 20, per_batch: int = 500) -> dict:
    r = run_midpoint(cfg.alpha, (20, 80, 320), per_batch, batches, cfg.seed)
    res = {k: v for k, v in r.results.items() if k != "batch_probabilities"}
    return _out("midpoint", res, r.gates)


def check_shape(cfg: RunConfig, seeds: int = 20) -> dict:
    r = run_shape_convergence((100, 1000), seeds, cfg.seed)
    return _out("shape", r.results, r.gates)


def check_ci(cfg: RunConfig, seeds: int = 5, side: int = 60) -> dict:
    worst_plus = worst_minus = 0.0
    path_bad = prop52_bad = sep_bad = sep_checked = corner_bad = 0
    checked = 0
    for s in range(cfg.seed, cfg.seed + seeds):
        _, bf = _field(cfg, s, lo=(-side, -side))
        h = side // 2
        win = LatticeWindow((-h, -h), (h - 1, h - 1))
        path = DownRightPath.staircase((0, 0), 2 * h - 2)
        bl = boundary_lpp_plus(bf, path, win)
        n, r = bl.identity_residual()
        checked += n
        worst_plus = max(worst_plus, r)
        S = southwest_arrows(bf, win)
        A = arrow_field(bf, win)
        for x in list(win.sites())[:: max(1, win.area // 300)]:
            if bl.checked[win.index(x)] and bl.labels[win.index(x)] == 1 and x in S.window:
                p = maximizing_path(bl, x)
                path_bad += p != trace(S, x, len(p) - 1).sites
        phi = competition_interface_plus(bl, 1, max_steps=40)
        prop52_bad += phi.sites != trace(A, phi.sites[0], len(phi.sites) - 1).sites
        sep = check_separation(bl, phi, 1, max_samples=500, seed=s)
        sep_bad += sep["violations"]
        sep_checked += sep["checked"]
        apex = Site(h - 1, h - 1)
        corner = DownRightPath.corner(apex, side - 1, side - 1)
        bm = boundary_lpp_minus(bf, corner, win)
        worst_minus = max(worst_minus, bm.identity_residual()[1])
        psi = interface_minus_from(bm, apex)
        corner_bad += psi.sites != trace(S, apex, len(psi.sites) - 1).sites
    res = {
        "checked_sites": checked,
        "max_plus_residual": worst_plus,
        "max_minus_residual": worst_minus,
        "maximizing_path_mismatches": path_bad,
        "interface_geodesic_mismatches": prop52_bad,
        "separation_checked": sep_checked,
        "separation_violations": sep_bad,
        "corner_interface_mismatches": corner_bad,
    }
    gates = {
        "plus_identity": worst_plus <= 1e-9 and checked > 0,
        "minus_identity": worst_minus <= 1e-9,
        "maximizing_paths": path_bad == 0,
        "interface_is_geodesic": prop52_bad == 0,
        "separation": sep_bad == 0 and sep_checked > 0,
        "corner_interface": corner_bad == 0,
    }
    return _out("ci", res, gates)


CHECKS = {
    "lpp": check_lpp,
    "stationary": check_stationary,
    "busemann": check_busemann,
    "trees": check_trees,
    "classify": check_classify,
    "markov": check_markov,
    "first_step": check_first_step,
    "midpoint": check_midpoint,
    "shape": check_shape,
    "ci": check_ci,
}

VERIFY_ALL = ("lpp", "stationary", "busemann", "trees", "first_step", "markov", "midpoint", "shape", "ci")


def run_check(name: str, cfg: RunConfig) -> dict:
    return CHECKS[name](cfg)
