import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cgmlab.stats import binomial_se, block_bootstrap_se, block_means, correlation_bound, ks_pass_fraction, ks_pvalue, within


def test_block_means_drop_partial_block():
    v = np.arange(10.0)
    assert np.array_equal(block_means(v, 4), [1.5, 5.5])
    assert np.array_equal(block_means(np.arange(3.0), 8), [1.0])


def test_block_means_pool_rows():
    v = np.arange(16.0).reshape(2, 8)
    assert block_means(v, 4).tolist() == [1.5, 5.5, 9.5, 13.5]


def test_bootstrap_se_iid():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(100, 320))
    se = block_bootstrap_se(x, 32, seed=1)
    assert se == pytest.approx(1 / math.sqrt(x.size), rel=0.15)


def test_bootstrap_se_sees_correlation():
    rng = np.random.default_rng(0)
    # runs of 16 identical values: the naive SE is 4x too small
    x = np.repeat(rng.normal(size=(50, 40)), 16, axis=1)
    naive = x.std() / math.sqrt(x.size)
    assert block_bootstrap_se(x, 32, seed=2) > 3 * naive


def test_ks_helpers():
    rng = np.random.default_rng(3)
    rows = rng.exponential(0.5, size=(100, 200))
    assert ks_pass_fraction(rows, 2.0) >= 0.9
    assert ks_pvalue(rows[0], 0.2) < 1e-6


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0.001, 5))
def test_within_is_symmetric(v, t, se):
    assert within(v, t, se) == within(t, v, se)


def test_bounds():
    assert correlation_bound(10_000) == pytest.approx(0.04)
    assert binomial_se(0.5, 100) == pytest.approx(0.05)
    assert math.isnan(binomial_se(0.5, 0))
