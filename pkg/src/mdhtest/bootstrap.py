"""
Wild bootstrap calibration.

Two families are implemented:

* auxiliary-variable bootstrap for the V-statistic sums ``M_n`` and
  ``T_n``: each lag term ``m**-2 * 1'(A o B)1`` is replaced by the
  quadratic form ``m**-2 * W'(A o B)W`` with ``W`` i.i.d. N(0, 1)
  (``ln = 0``) or a stationary Gaussian AR(1) with coefficient
  ``exp(-1/ln)``;
* multiplier bootstrap for ``M_wn^F`` and ``D_n^2``: the statistic is
  recomputed on ``X_t * w_t`` with Mammen or Rademacher weights.

Every replicate ``b`` draws from its own stream derived from
``(seed, b)``, so results do not depend on how replicates are scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.signal import lfilter

from ._errors import MdhError
from .kernels import KernelSpec
from .measures import as_series, double_center, distance_matrix
from .statistics import (
    StatKind,
    _dn2_value,
    _kernel_lags,
    _mwnf_value,
    lag_weights,
    stat_dn2,
    stat_mn,
    stat_mwnf,
    stat_tn,
)

SQRT5 = math.sqrt(5.0)
MAMMEN_LOW = (1.0 - SQRT5) / 2.0
MAMMEN_HIGH = (1.0 + SQRT5) / 2.0
MAMMEN_P_LOW = (SQRT5 + 1.0) / (2.0 * SQRT5)


class Scheme(str, Enum):
    AUX = "aux"
    MAMMEN = "mammen"
    RADEMACHER = "rademacher"


@dataclass(frozen=True)
class BootstrapConfig:
    """Bootstrap settings.

    ``ln`` is the dependence length of the auxiliary AR(1) process and is
    only used by the auxiliary-variable scheme; ``ln = 0`` gives i.i.d.
    normals.
    """

    scheme: Scheme = Scheme.AUX
    reps: int = 499
    ln: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.reps < 1:
            raise MdhError(f"need at least one bootstrap replicate, got {self.reps}")
        if self.ln < 0:
            raise MdhError(f"ln must be nonnegative, got {self.ln}")
        if not 0 <= self.seed < 2**64:
            raise MdhError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class BootstrapResult:
    observed: float
    replicates: np.ndarray
    pvalue: float


def default_scheme(kind: StatKind | str) -> Scheme:
    kind = StatKind(kind)
    if kind in (StatKind.MN, StatKind.TN):
        return Scheme.AUX
    if kind is StatKind.MWNF:
        return Scheme.MAMMEN
    if kind is StatKind.DN2:
        return Scheme.RADEMACHER
    raise MdhError(f"no bootstrap scheme for statistic {kind.value}")


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for replicate ``index`` of a run seeded ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def pvalue(observed: float, replicates: np.ndarray) -> float:
    """Fraction of replicates at least as large as the observed value."""
    return float(np.count_nonzero(replicates >= observed)) / replicates.size


def aux_sequence(m: int, ln: float, rng: np.random.Generator) -> np.ndarray:
    """Auxiliary multipliers with N(0, 1) marginals.

    For ``ln > 0``: ``W_t = rho W_{t-1} + sqrt(1 - rho^2) e_t`` with
    ``rho = exp(-1/ln)`` and ``W_0 ~ N(0, 1)``; ``W_1..W_m`` are returned.
    """
    if ln == 0:
        return rng.standard_normal(m)
    rho = math.exp(-1.0 / ln)
    w0 = rng.standard_normal()
    eps = rng.standard_normal(m)
    out, _ = lfilter([math.sqrt(1.0 - rho * rho)], [1.0, -rho], eps, zi=[rho * w0])
    return out


def aux_matrix(n: int, cfg: BootstrapConfig) -> np.ndarray:
    """``n x reps`` matrix whose column ``b`` is replicate ``b``'s sequence."""
    W = np.empty((n, cfg.reps))
    for b in range(cfg.reps):
        W[:, b] = aux_sequence(n, cfg.ln, replicate_rng(cfg.seed, b))
    return W


def mammen_weights(size, rng: np.random.Generator) -> np.ndarray:
    """Two-point weights with mean 0 and variance 1."""
    return np.where(rng.random(size) < MAMMEN_P_LOW, MAMMEN_LOW, MAMMEN_HIGH)


def rademacher_weights(size, rng: np.random.Generator) -> np.ndarray:
    return np.where(rng.random(size) < 0.5, 1.0, -1.0)


def mn_replicates(x, kernel: KernelSpec, W: np.ndarray) -> np.ndarray:
    """Bootstrap ``M_n`` values for each column of the auxiliary matrix ``W``.

    Lag ``j`` uses the last ``n - j`` rows of ``W``, aligned with the
    response values ``X_{j+1..n}``. ``A o B`` is never formed: with
    ``B = -xc xc'`` the quadratic form equals ``-(xc*w)' A (xc*w)``.
    """
    x = as_series(x, min_length=3)
    n = x.size
    lags = _kernel_lags(n, kernel, truncate=True)
    weights = lag_weights(n, kernel, lags)
    dist = distance_matrix(x)
    out = np.zeros(W.shape[1])
    for j, wt in zip(lags, weights):
        m = n - j
        A = double_center(dist[:m, :m])
        resp = x[j:]
        Z = (resp - resp.mean())[:, None] * W[j:, :]
        quad = -np.einsum("ij,ij->j", Z, A @ Z)
        out += wt * quad / m**2
    return out


def tn_replicates(x, kernel: KernelSpec, W: np.ndarray) -> np.ndarray:
    x = as_series(x, min_length=3)
    n = x.size
    lags = _kernel_lags(n, kernel, truncate=True)
    weights = lag_weights(n, kernel, lags)
    dist = distance_matrix(x)
    out = np.zeros(W.shape[1])
    for j, wt in zip(lags, weights):
        m = n - j
        H = double_center(dist[j:, j:]) * double_center(dist[:m, :m])
        Wj = W[j:, :]
        out += wt * np.einsum("ij,ij->j", Wj, H @ Wj) / m**2
    return out


def _result(observed: float, reps: np.ndarray) -> BootstrapResult:
    return BootstrapResult(observed=observed, replicates=reps, pvalue=pvalue(observed, reps))


def boot_mn(x, kernel: KernelSpec, cfg: BootstrapConfig) -> BootstrapResult:
    if cfg.scheme is not Scheme.AUX:
        raise MdhError("M_n is calibrated with the auxiliary-variable scheme")
    x = as_series(x, min_length=3)
    observed = stat_mn(x, kernel).value
    return _result(observed, mn_replicates(x, kernel, aux_matrix(x.size, cfg)))


def boot_tn(x, kernel: KernelSpec, cfg: BootstrapConfig) -> BootstrapResult:
    if cfg.scheme is not Scheme.AUX:
        raise MdhError("T_n is calibrated with the auxiliary-variable scheme")
    x = as_series(x, min_length=3)
    observed = stat_tn(x, kernel).value
    return _result(observed, tn_replicates(x, kernel, aux_matrix(x.size, cfg)))


def boot_multiplier(x, kind: StatKind | str, cfg: BootstrapConfig, *, pmax: int | None = None,
                    normalized: bool = True) -> BootstrapResult:
    """Multiplier bootstrap: recompute the statistic on ``X_t * w_t``.

    The series is multiplied as is, without prior centering.
    """
    kind = StatKind(kind)
    if cfg.scheme is Scheme.MAMMEN:
        draw = mammen_weights
    elif cfg.scheme is Scheme.RADEMACHER:
        draw = rademacher_weights
    else:
        raise MdhError("multiplier bootstrap needs the mammen or rademacher scheme")
    x = as_series(x, min_length=3)
    if kind is StatKind.MWNF:
        if pmax is None:
            raise MdhError("pmax is required for M_wn^F")
        observed = stat_mwnf(x, pmax).value
        statfn = lambda y: _mwnf_value(y, pmax)  # noqa: E731
    elif kind is StatKind.DN2:
        observed = stat_dn2(x, normalized=normalized).value
        statfn = lambda y: _dn2_value(y, normalized)  # noqa: E731
    else:
        raise MdhError(f"multiplier bootstrap is not defined for {kind.value}")
    reps = np.empty(cfg.reps)
    for b in range(cfg.reps):
        w = draw(x.size, replicate_rng(cfg.seed, b))
        reps[b] = statfn(x * w)
    return _result(observed, reps)
