"""
Sample auto-martingale difference divergence and auto-distance covariance.

Both measures are V-statistics built from double-centered pairwise distance
matrices of the lag-aligned sample ``{(X_t, X_{t-j})}``. For the martingale
difference divergence the *conditioning* values ``X_{t-j}`` enter through
plain distances and the *response* values ``X_t`` through half-squared
distances, so that the estimand is the weighted norm of
``Cov(X_t, exp(i v X_{t-j}))``.

Double-centering the half-squared distances of a vector ``x`` gives exactly
``-(x_r - xbar)(x_l - xbar)``. The production path uses that identity and
never forms the response matrix; :attr:`LagPairView.B` keeps the explicit
matrix around as the reference route.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._errors import BadMomentOrder, LagOutOfRange, MdhError, NonFiniteInput, SeriesTooShort

logger = logging.getLogger(__name__)

# Pre-clamp values below -NEG_TOL * scale indicate a real inconsistency,
# anything between that and 0 is rounding noise.
NEG_TOL = 1e-10


def as_series(x, min_length: int = 2) -> np.ndarray:
    """Validate ``x`` as a finite one-dimensional float series."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise MdhError(f"expected a univariate series, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("series contains NaN or infinite values")
    if arr.size < min_length:
        raise SeriesTooShort(f"series of length {arr.size} is shorter than {min_length}")
    return arr


def distance_matrix(x: np.ndarray) -> np.ndarray:
    """Pairwise absolute differences ``|x_r - x_l|``."""
    return np.abs(x[:, None] - x[None, :])


def double_center(a: np.ndarray) -> np.ndarray:
    """Subtract row and column means and add back the grand mean.

    ``a`` must be symmetric; its row means double as column means, which
    keeps the result exactly symmetric.
    """
    row = a.mean(axis=1)
    return a - (row[:, None] + row[None, :]) + row.mean()


def _check_lag(n: int, lag: int) -> int:
    lag = int(lag)
    if lag < 0 or lag > n - 2:
        raise LagOutOfRange(f"lag {lag} outside [0, {n - 2}] for series of length {n}")
    return lag


def _clamp(value: float, scale: float, what: str) -> float:
    if value >= 0.0:
        return value
    if value < -NEG_TOL * scale:
        logger.warning("%s pre-clamp value %.3e below tolerance (scale %.3e)", what, value, scale)
    return 0.0


def _mdd2_raw(dist: np.ndarray, response: np.ndarray) -> tuple[float, float]:
    # sum_rl A_rl B_rl equals sum_rl a_rl B_rl since B is already centered
    m = response.size
    xc = response - response.mean()
    value = -float(xc @ (dist @ xc)) / m**2
    ac = np.abs(xc)
    scale = float(ac @ (dist @ ac)) / m**2
    return value, scale


def _mdd2_block(dist: np.ndarray, response: np.ndarray) -> float:
    value, scale = _mdd2_raw(dist, response)
    return _clamp(value, scale, "mdd2")


def _dcov2_block(dist_x: np.ndarray, dist_y: np.ndarray) -> float:
    m = dist_x.shape[0]
    A = double_center(dist_x)
    B = double_center(dist_y)
    value = float(np.sum(A * B)) / m**2
    scale = float(np.sum(np.abs(A) * np.abs(B))) / m**2
    return _clamp(value, scale, "dcov2")


@dataclass(frozen=True)
class LagPairView:
    """Aligned sample ``(X_t, X_{t-j})`` for ``t = j+1..n``.

    ``A`` is the double-centered plain-distance matrix of the conditioning
    (lagged) values and ``B`` the double-centered half-squared-distance
    matrix of the response (current) values. Both are computed on first
    access.
    """

    lag: int
    response: np.ndarray
    conditioning: np.ndarray

    @property
    def m(self) -> int:
        return self.response.size

    @cached_property
    def a(self) -> np.ndarray:
        return distance_matrix(self.conditioning)

    @cached_property
    def A(self) -> np.ndarray:
        return double_center(self.a)

    @cached_property
    def B(self) -> np.ndarray:
        d = self.response[:, None] - self.response[None, :]
        return double_center(0.5 * d * d)

    def mdd2(self, use_matrix: bool = False) -> float:
        """Squared sample MDD, ``m**-2 * sum(A * B)``.

        ``use_matrix=True`` forms both centered matrices explicitly instead
        of using the product-moment identity for ``B``.
        """
        if not use_matrix:
            return _mdd2_block(self.a, self.response)
        m = self.m
        value = float(np.sum(self.A * self.B)) / m**2
        scale = float(np.sum(np.abs(self.A) * np.abs(self.B))) / m**2
        return _clamp(value, scale, "mdd2")


def build_lag_pair(x, lag: int, power: int = 1) -> LagPairView:
    """Align ``x`` at ``lag``; the response values are raised to ``power``."""
    x = as_series(x)
    lag = _check_lag(x.size, lag)
    response = x[lag:] if power == 1 else x[lag:] ** power
    return LagPairView(lag=lag, response=response, conditioning=x[: x.size - lag])


@dataclass(frozen=True)
class MomentEstimates:
    """Auxiliary moments used for standardization.

    Attributes
    ----------
    r1:
        Sample variance with divisor ``n``.
    mean_pair_dist:
        V-statistic estimate of ``E|X_t - X_t'|``.
    dvar0:
        Squared sample distance variance (``dcov2`` at lag 0).
    """

    r1: float
    mean_pair_dist: float
    dvar0: float


@dataclass(frozen=True)
class MddValue:
    lag: int
    mdd2: float
    mdc2: float


def moment_estimates(x) -> MomentEstimates:
    x = as_series(x)
    dist = distance_matrix(x)
    r1 = float(np.mean((x - x.mean()) ** 2))
    return MomentEstimates(
        r1=r1,
        mean_pair_dist=float(dist.mean()),
        dvar0=_dcov2_block(dist, dist),
    )


def mdd2(x, lag: int, *, use_matrix: bool = False) -> float:
    """Squared sample auto-MDD of ``x`` at ``lag``."""
    return build_lag_pair(x, lag).mdd2(use_matrix=use_matrix)


def mdd2_power(x, lag: int, k: int) -> float:
    """Squared MDD of ``X_t**k`` given ``X_{t-lag}``.

    ``k = 2, 3, 4`` target conditional variance, skewness and kurtosis
    dependence; ``k = 1`` is :func:`mdd2`.
    """
    if k not in (1, 2, 3, 4):
        raise BadMomentOrder(f"moment order must be in 1..4, got {k}")
    return build_lag_pair(x, lag, power=k).mdd2()


def normalized_mdc2(value: float, moments: MomentEstimates) -> float:
    denom = moments.r1 * np.sqrt(moments.dvar0)
    if denom == 0.0:
        return 0.0
    return float(min(max(value / denom, 0.0), 1.0))


def mdc2(x, lag: int, moments: MomentEstimates | None = None) -> float:
    """Squared auto-martingale difference correlation.

    Normalized by ``sqrt(r1**2 * dvar0)`` so the result is scale free;
    clamped to ``[0, 1]`` and 0 for a constant series.
    """
    x = as_series(x)
    if moments is None:
        moments = moment_estimates(x)
    return normalized_mdc2(mdd2(x, lag), moments)


def mdd_value(x, lag: int, moments: MomentEstimates | None = None) -> MddValue:
    x = as_series(x)
    if moments is None:
        moments = moment_estimates(x)
    value = mdd2(x, lag)
    return MddValue(lag=int(lag), mdd2=value, mdc2=normalized_mdc2(value, moments))


def dcov2(x, lag: int) -> float:
    """Squared sample auto-distance covariance of ``x`` at ``lag``."""
    x = as_series(x)
    lag = _check_lag(x.size, lag)
    dist = distance_matrix(x)
    m = x.size - lag
    return _dcov2_block(dist[lag:, lag:], dist[:m, :m])


def mdd2_lags(x, lags) -> np.ndarray:
    """:func:`mdd2` at several lags, sharing one distance matrix.

    The conditioning values at lag ``j`` are the leading ``n - j`` entries
    of ``x``, so their distances are a leading block of the full matrix.
    """
    x = as_series(x)
    dist = distance_matrix(x)
    out = np.empty(len(lags))
    for i, lag in enumerate(lags):
        lag = _check_lag(x.size, lag)
        m = x.size - lag
        out[i] = _mdd2_block(np.ascontiguousarray(dist[:m, :m]), x[lag:])
    return out


def dcov2_lags(x, lags) -> np.ndarray:
    x = as_series(x)
    dist = distance_matrix(x)
    out = np.empty(len(lags))
    for i, lag in enumerate(lags):
        lag = _check_lag(x.size, lag)
        m = x.size - lag
        out[i] = _dcov2_block(dist[lag:, lag:], dist[:m, :m])
    return out
