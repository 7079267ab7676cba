import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mdhtest import (
    BadMomentOrder,
    LagOutOfRange,
    NonFiniteInput,
    SeriesTooShort,
    build_lag_pair,
    dcov2,
    mdc2,
    mdd2,
    mdd2_power,
    mdd_value,
    moment_estimates,
    simulate,
)
from mdhtest.measures import dcov2_lags, double_center, mdd2_lags
from mdhtest.validation import mdd2_product_oracle

# exact rational values from a Fraction-based brute-force computation
MDD2_1TO5_LAG1 = 17 / 16
DCOV2_1TO5_LAG1 = 13 / 16
DVAR0_1TO5 = 152 / 125
MDD2_DOUBLING_LAG1 = 176 / 27
MDC2_SMALL_LAG1 = 1236 / 2125


def straight_line_center(a):
    """Double centering with explicit loops."""
    m = len(a)
    rows = [sum(a[r][l] for l in range(m)) / m for r in range(m)]
    cols = [sum(a[r][l] for r in range(m)) / m for l in range(m)]
    grand = sum(rows) / m
    return np.array([[a[r][l] - rows[r] - cols[l] + grand for l in range(m)] for r in range(m)])


def brute_variance(x):
    mean = sum(x) / len(x)
    return sum((v - mean) ** 2 for v in x) / len(x)


def brute_dcov2(resp, cond):
    m = len(resp)
    A = straight_line_center([[abs(resp[r] - resp[l]) for l in range(m)] for r in range(m)])
    B = straight_line_center([[abs(cond[r] - cond[l]) for l in range(m)] for r in range(m)])
    return float(np.sum(A * B)) / m**2


finite_series = arrays(
    np.float64,
    st.integers(6, 30),
    elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False),
)


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


# --- lag pairs -----------------------------------------------------------


def test_alignment():
    view = build_lag_pair([1, 2, 3], 1)
    assert view.m == 2
    np.testing.assert_array_equal(view.conditioning, [1, 2])
    np.testing.assert_array_equal(view.response, [2, 3])


def test_constant_series_matrices_vanish():
    view = build_lag_pair([4.0, 4.0, 4.0, 4.0], 1)
    assert not np.any(view.A)
    assert not np.any(view.B)


def test_matrices_match_straight_line_centering():
    view = build_lag_pair([1, 2, 4, 8], 1)
    c, y = [1, 2, 4], [2, 4, 8]
    A = straight_line_center([[abs(a - b) for b in c] for a in c])
    B = straight_line_center([[0.5 * (a - b) ** 2 for b in y] for a in y])
    np.testing.assert_allclose(view.A, A, rtol=0, atol=1e-14)
    np.testing.assert_allclose(view.B, B, rtol=0, atol=1e-14)


def test_b_is_negative_outer_product():
    rng = np.random.default_rng(1)
    view = build_lag_pair(rng.standard_normal(20), 3)
    yc = view.response - view.response.mean()
    np.testing.assert_allclose(view.B, -np.outer(yc, yc), atol=1e-12)


def test_lag_errors():
    with pytest.raises(LagOutOfRange):
        build_lag_pair([1, 2, 3], 2)
    with pytest.raises(LagOutOfRange):
        mdd2([1, 2, 3], -1)
    with pytest.raises(NonFiniteInput):
        build_lag_pair([1.0, np.nan, 2.0], 1)
    with pytest.raises(SeriesTooShort):
        moment_estimates([1.0])


# --- mdd2 ----------------------------------------------------------------


@pytest.mark.parametrize("lag", [0, 1, 2])
def test_mdd2_constant_is_zero(lag):
    assert mdd2([2.5] * 6, lag) == 0.0


def test_mdd2_small_example():
    x = [1, 2, 3, 4, 5]
    assert mdd2(x, 1) == pytest.approx(MDD2_1TO5_LAG1, rel=1e-12)
    assert mdd2(x, 1, use_matrix=True) == pytest.approx(MDD2_1TO5_LAG1, rel=1e-12)
    assert _rel(mdd2(x, 1), mdd2_product_oracle(x, 1)) < 1e-12
    assert mdd2([1, 2, 4, 8], 1) == pytest.approx(MDD2_DOUBLING_LAG1, rel=1e-12)


def test_mdd2_matches_integral_oracle_on_garch():
    from mdhtest.validation import QuadratureSpec, mdd2_integral_oracle

    x = simulate(2, 50, seed=11)
    oracle = mdd2_integral_oracle(x, 2, QuadratureSpec(-2000.0, 2000.0, 200_001))
    assert _rel(mdd2(x, 2), oracle) < 1e-3


def test_matrix_and_fast_paths_agree():
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = rng.standard_normal(int(rng.integers(5, 40)))
        for j in (1, 2, 3):
            assert _rel(mdd2(x, j), mdd2(x, j, use_matrix=True)) < 1e-10


def test_shared_matrix_lags_match_single_lag():
    x = np.random.default_rng(3).standard_t(4, 60)
    lags = np.arange(0, 10)
    np.testing.assert_allclose(mdd2_lags(x, lags), [mdd2(x, j) for j in lags], rtol=1e-12, atol=0)
    np.testing.assert_allclose(dcov2_lags(x, lags), [dcov2(x, j) for j in lags], rtol=1e-12, atol=0)


def test_consistency_under_iid():
    medians = []
    for n in (50, 200, 800):
        vals = [mdd2(simulate(1, n, seed=s), 1) for s in range(50)]
        medians.append(np.median(vals))
    assert medians[0] >= 2 * medians[1]
    assert medians[1] >= 2 * medians[2]


# --- mdc2 ----------------------------------------------------------------


def test_mdc2_constant_is_zero():
    assert mdc2([1.0] * 5, 1) == 0.0
    v = mdd_value([1.0] * 5, 2)
    assert (v.mdd2, v.mdc2, v.lag) == (0.0, 0.0, 2)


def test_mdc2_componentwise():
    x = [0.1, -0.4, 0.9, 0.2, -0.7, 0.5]
    expected = mdd2_product_oracle(x, 1) / math.sqrt(brute_variance(x) ** 2 * brute_dcov2(x, x))
    assert mdc2(x, 1) == pytest.approx(expected, rel=1e-12)
    assert mdc2(x, 1) == pytest.approx(MDC2_SMALL_LAG1, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(finite_series, st.integers(1, 4))
def test_mdc2_in_unit_interval(x, lag):
    assert 0.0 <= mdc2(x, lag) <= 1.0


# --- dcov2 and moments ---------------------------------------------------


def test_dcov2_constant_and_example():
    assert dcov2([3.0] * 5, 1) == 0.0
    assert dcov2([1, 2, 3, 4, 5], 1) == pytest.approx(DCOV2_1TO5_LAG1, rel=1e-12)


def test_dcov2_lag0_is_dvar0():
    x = [1, 2, 3, 4, 5]
    assert dcov2(x, 0) == pytest.approx(moment_estimates(x).dvar0, rel=1e-14)
    assert moment_estimates(x).dvar0 == pytest.approx(DVAR0_1TO5, rel=1e-12)


def test_dcov2_matches_integral_oracle():
    from mdhtest.validation import dcov2_integral_oracle

    x = np.random.default_rng(4).standard_normal(30)
    assert _rel(dcov2(x, 1), dcov2_integral_oracle(x, 1)) < 1e-3


def test_dcov2_role_symmetry():
    x = np.random.default_rng(5).standard_normal(25)
    resp, cond = x[2:], x[:-2]
    assert brute_dcov2(resp, cond) == pytest.approx(brute_dcov2(cond, resp), rel=1e-12)
    assert dcov2(x, 2) == pytest.approx(brute_dcov2(resp, cond), rel=1e-12)


def test_moment_examples():
    assert moment_estimates([0, 0, 0]) == moment_estimates([0.0, 0.0, 0.0])
    m = moment_estimates([0, 0, 0])
    assert (m.r1, m.mean_pair_dist, m.dvar0) == (0.0, 0.0, 0.0)
    m = moment_estimates([0, 1])
    assert m.r1 == 0.25 and m.mean_pair_dist == 0.5
    assert moment_estimates([1, 2, 3]).mean_pair_dist == pytest.approx(8 / 9, rel=1e-15)


# --- higher moments ------------------------------------------------------


def test_mdd2_power_reduces_to_mdd2():
    x = np.random.default_rng(6).standard_normal(30)
    assert mdd2_power(x, 2, 1) == mdd2(x, 2)
    assert mdd2_power([2.0] * 6, 1, 3) == 0.0


def test_mdd2_power_matches_oracle():
    x = simulate(3, 40, seed=9)
    assert _rel(mdd2_power(x, 1, 2), mdd2_product_oracle(x, 1, response_power=2)) < 1e-12


@pytest.mark.parametrize("k", [0, 5, -1])
def test_bad_moment_order(k):
    with pytest.raises(BadMomentOrder):
        mdd2_power([1.0, 2.0, 3.0, 5.0], 1, k)


# --- invariants ----------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(finite_series, st.integers(0, 4))
def test_double_centering_row_column_nullity(x, lag):
    view = build_lag_pair(x, lag)
    for mat in (view.A, view.B):
        bound = 1e-10 * view.m * max(np.max(np.abs(mat)), 1e-300)
        assert np.all(np.abs(mat.sum(axis=0)) <= bound)
        assert np.all(np.abs(mat.sum(axis=1)) <= bound)
        np.testing.assert_array_equal(mat, mat.T)


@settings(max_examples=200, deadline=None)
@given(finite_series, st.integers(1, 4))
def test_product_identity(x, lag):
    value, oracle = mdd2(x, lag), mdd2_product_oracle(x, lag)
    assert abs(value - max(oracle, 0.0)) <= 1e-12 * max(abs(oracle), 1e-300) + 1e-12 * _abs_scale(x, lag)


def _abs_scale(x, lag):
    view = build_lag_pair(x, lag)
    yc = np.abs(view.response - view.response.mean())
    return float(yc @ view.a @ yc) / view.m**2


@settings(max_examples=200, deadline=None)
@given(finite_series, st.integers(1, 4))
def test_nonnegative(x, lag):
    assert mdd2(x, lag) >= 0.0
    assert dcov2(x, lag) >= 0.0
    assert mdd2_product_oracle(x, lag) >= -1e-10 * max(_abs_scale(x, lag), 1.0)


@settings(max_examples=200, deadline=None)
@given(finite_series, st.integers(1, 4), st.floats(-100, 100))
def test_translation_invariance(x, lag, c):
    y = x + c
    for f in (mdd2, dcov2):
        a, b = f(x, lag), f(y, lag)
        assert abs(a - b) <= 1e-9 * max(abs(a), _abs_scale(x, lag), 1e-12)
    assert mdc2(y, lag) == pytest.approx(mdc2(x, lag), rel=1e-8, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(finite_series, st.integers(1, 4), st.floats(0.1, 10.0))
def test_scale_laws(x, lag, c):
    y = c * x
    s = _abs_scale(x, lag)
    assert abs(mdd2(y, lag) - c**3 * mdd2(x, lag)) <= 1e-10 * c**3 * max(mdd2(x, lag), s)
    d = dcov2(x, lag)
    assert abs(dcov2(y, lag) - c**2 * d) <= 1e-10 * c**2 * max(d, moment_estimates(x).dvar0)
    assert mdc2(y, lag) == pytest.approx(mdc2(x, lag), rel=1e-8, abs=1e-10)
