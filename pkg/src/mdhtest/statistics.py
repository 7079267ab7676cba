"""
Portmanteau-type statistics for the martingale difference hypothesis.

``stat_mn``    kernel-weighted sum of squared auto-MDD over lags.
``stat_m99``   ``stat_mn`` centered and scaled to be asymptotically N(0, 1)
               under i.i.d. data.
``stat_tn``    the same construction with auto-distance covariance, which
               tests serial independence rather than the MDH.
``stat_mwnf``  truncated sum of squared auto-MDD with ``(n-j+1)/(n j^2)``
               weights.
``stat_dn2``   generalized spectral distribution statistic with a standard
               normal weighting function.

Lag sums are accumulated with :func:`math.fsum` so the result does not
depend on summation order.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._errors import DegenerateSeries, LagOutOfRange
from .kernels import KernelSpec
from .measures import as_series, dcov2_lags, distance_matrix, mdd2_lags, moment_estimates


class StatKind(str, Enum):
    MN = "mn"
    M99 = "m99"
    TN = "tn"
    MWNF = "mwnf"
    DN2 = "dn2"


@dataclass(frozen=True)
class StatisticValue:
    kind: StatKind
    value: float
    config: dict = field(default_factory=dict)


def _kernel_lags(n: int, kernel: KernelSpec, truncate: bool) -> np.ndarray:
    if kernel.bandwidth <= 1.0:
        warnings.warn(
            f"bandwidth {kernel.bandwidth:g} <= 1 puts zero weight on every lag",
            RuntimeWarning,
            stacklevel=3,
        )
    top = kernel.max_lag(n - 2) if truncate else n - 2
    return np.arange(1, top + 1)


def _kernel_config(kernel: KernelSpec) -> dict:
    return {"kernel": kernel.kind.value, "bandwidth": kernel.bandwidth}


def lag_weights(n: int, kernel: KernelSpec, lags: np.ndarray) -> np.ndarray:
    """``(n - j) * k(j/p)**2`` for each lag."""
    return (n - lags) * kernel.weights(lags) ** 2


def stat_mn(x, kernel: KernelSpec, *, truncate: bool = True) -> StatisticValue:
    """``sum_j (n - j) k^2(j/p) mdd2(j)``.

    Only lags with ``j < p`` carry weight; ``truncate=False`` sums over all
    ``j = 1..n-2`` and gives the identical result.
    """
    x = as_series(x, min_length=3)
    lags = _kernel_lags(x.size, kernel, truncate)
    terms = lag_weights(x.size, kernel, lags) * mdd2_lags(x, lags)
    return StatisticValue(StatKind.MN, math.fsum(terms), _kernel_config(kernel))


def standardization_terms(x, kernel: KernelSpec) -> tuple[float, float]:
    """Centering and variance terms ``(C0, D0)`` for ``stat_m99``.

    ``C0 = r1 * sum_{j<n} k^2(j/p) * E|X - X'|`` and
    ``D0 = 2 r1^2 * sum_{j<n-1} k^4(j/p) * dvar0``.
    """
    x = as_series(x)
    n = x.size
    mom = moment_estimates(x)
    k = kernel.weights(np.arange(1, n))
    c0 = mom.r1 * math.fsum(k**2) * mom.mean_pair_dist
    d0 = 2.0 * mom.r1**2 * math.fsum(k[: n - 2] ** 4) * mom.dvar0
    return c0, d0


def stat_m99(x, kernel: KernelSpec) -> StatisticValue:
    x = as_series(x, min_length=4)
    c0, d0 = standardization_terms(x, kernel)
    if d0 <= 0.0:
        raise DegenerateSeries("variance term is zero (constant series or zero kernel weights)")
    mn = stat_mn(x, kernel).value
    return StatisticValue(StatKind.M99, (mn - c0) / math.sqrt(d0), _kernel_config(kernel))


def stat_tn(x, kernel: KernelSpec, *, truncate: bool = True) -> StatisticValue:
    """``sum_j (n - j) k^2(j/p) dcov2(j)``."""
    x = as_series(x, min_length=3)
    lags = _kernel_lags(x.size, kernel, truncate)
    terms = lag_weights(x.size, kernel, lags) * dcov2_lags(x, lags)
    return StatisticValue(StatKind.TN, math.fsum(terms), _kernel_config(kernel))


def mwnf_weights(n: int, pmax: int) -> np.ndarray:
    j = np.arange(1, pmax + 1)
    return (n - j + 1) / (n * j**2)


def _mwnf_value(x: np.ndarray, pmax: int) -> float:
    n = x.size
    terms = n * mwnf_weights(n, pmax) * mdd2_lags(x, np.arange(1, pmax + 1))
    return math.fsum(terms)


def stat_mwnf(x, pmax: int) -> StatisticValue:
    """``n * sum_{j<=pmax} w_j * mdd2(j)`` with ``w_j = (n-j+1)/(n j^2)``.

    For a univariate series the norm of the divergence matrix is the
    (nonnegative) squared MDD itself.
    """
    x = as_series(x, min_length=3)
    pmax = int(pmax)
    if pmax < 1 or pmax > x.size - 2:
        raise LagOutOfRange(f"pmax must be in [1, {x.size - 2}], got {pmax}")
    return StatisticValue(StatKind.MWNF, _mwnf_value(x, pmax), {"pmax": pmax})


def _dn2_value(x: np.ndarray, normalized: bool = True) -> float:
    n = x.size
    d = distance_matrix(x)
    gauss = np.exp(-0.5 * d * d)
    lags = np.arange(1, n - 1)
    # column j holds X_{j+1..n} minus its mean, zero padded to length n;
    # the lag-j kernel block is then the leading (n-j) x (n-j) corner
    cols = np.zeros((n, lags.size))
    for i, j in enumerate(lags):
        tail = x[j:]
        cols[: n - j, i] = tail - tail.mean()
    quad = np.einsum("ij,ij->j", cols, gauss @ cols)
    quad = np.maximum(quad, 0.0)
    weights = (n - lags) / (lags * math.pi) ** 2
    if normalized:
        weights = weights / (n - lags) ** 2
    # the j = n-1 term has a single centered observation and is exactly 0
    return math.fsum(weights * quad)


def stat_dn2(x, *, normalized: bool = True) -> StatisticValue:
    """Generalized spectral statistic with a standard normal weight.

    ``sum_j (n-j)/(j pi)^2 * (n-j)^-2 * sum_{t,s} (X_t - m_j)(X_s - m_j)
    exp(-(X_{t-j} - X_{s-j})^2 / 2)``, where ``m_j`` is the mean of the
    ``n - j`` retained observations ``X_{j+1..n}``. The ``(n-j)^-2``
    factor makes the inner double sum the squared weighted norm of the
    sample generalized covariance; ``normalized=False`` drops it.
    """
    x = as_series(x, min_length=3)
    return StatisticValue(StatKind.DN2, _dn2_value(x, normalized), {"normalized": normalized})
