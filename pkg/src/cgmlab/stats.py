"""Small statistical helpers shared by the experiments."""
from __future__ import annotations

import math

import numpy as np
from scipy import stats

BLOCK = 32


def ks_pvalue(samples, rate: float) -> float:
    return float(stats.kstest(np.asarray(samples, float), stats.expon(scale=1.0 / rate).cdf).pvalue)


def ks_pass_fraction(rows, rate: float, level: float = 0.05) -> float:
    return float(np.mean([ks_pvalue(r, rate) >= level for r in rows]))


def block_means(values: np.ndarray, block: int = BLOCK) -> np.ndarray:
    """Means of non-overlapping blocks along the last axis, pooled over rows.

    A trailing partial block is dropped.
    """
    v = np.asarray(values, dtype=np.float64)
    v = v.reshape(-1, v.shape[-1])
    L = v.shape[-1]
    nb = L // block
    if nb == 0:
        return v.mean(axis=-1)
    return v[:, : nb * block].reshape(v.shape[0] * nb, block).mean(axis=-1)


def block_bootstrap_se(values: np.ndarray, block: int = BLOCK, n_boot: int = 1000, seed: int = 0) -> float:
    """Bootstrap standard error of the overall mean, resampling whole blocks.

    Rows of ``values`` are independent replicas; blocks of ``block``
    consecutive entries within a row keep the short-range dependence.
    """
    bm = block_means(values, block)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, bm.size, size=(n_boot, bm.size))
    return float(bm[idx].mean(axis=1).std(ddof=1))


def within(value: float, target: float, se: float, k: float = 3.0) -> bool:
    return abs(value - target) <= k * se


def correlation_bound(n: int) -> float:
    return 4.0 / math.sqrt(n)


def binomial_se(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n) if n else float("nan")
