"""
Single-series testing and correlograms.

:class:`StatConfig` bundles everything needed to turn a series into a
p-value: the statistic, its kernel/bandwidth or truncation lag, and the
bootstrap scheme. It is shared by :func:`run_test` and the Monte Carlo
harness.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import norm

from ._errors import MdhError
from .bootstrap import (
    BootstrapConfig,
    Scheme,
    aux_matrix,
    boot_mn,
    boot_multiplier,
    boot_tn,
    default_scheme,
)
from .kernels import KernelKind, KernelSpec, make_kernel
from .measures import (
    as_series,
    dcov2_lags,
    distance_matrix,
    double_center,
    mdd2_lags,
    moment_estimates,
    normalized_mdc2,
)
from .statistics import StatKind, stat_m99


def _fraction_label(value: float) -> str:
    frac = Fraction(value).limit_denominator(20)
    if abs(float(frac) - value) < 1e-12:
        return f"{frac.numerator}/{frac.denominator}" if frac.denominator != 1 else str(frac.numerator)
    return f"{value:g}"


@dataclass(frozen=True)
class StatConfig:
    """Statistic plus calibration settings.

    Kernel statistics (``mn``, ``m99``, ``tn``) take ``kernel`` and either a
    raw ``bandwidth`` or the exponent ``lam`` (with ``bandwidth_scale``) of
    ``p = c n**lam``. ``mwnf`` takes ``pmax``. ``scheme=None`` selects the
    usual pairing: auxiliary variables for ``mn``/``tn``, Mammen for
    ``mwnf``, Rademacher for ``dn2``; ``m99`` uses its one-sided normal
    limit and no bootstrap.
    """

    stat: StatKind = StatKind.MN
    kernel: KernelKind | None = KernelKind.PARZEN
    lam: float | None = 0.4
    bandwidth_scale: float = 1.0
    bandwidth: float | None = None
    pmax: int | None = None
    scheme: Scheme | None = None
    reps: int = 499
    ln: float = 0.0
    normalized: bool = True

    def __post_init__(self):
        stat = StatKind(self.stat)
        object.__setattr__(self, "stat", stat)
        kernel_stat = stat in (StatKind.MN, StatKind.M99, StatKind.TN)
        if kernel_stat:
            object.__setattr__(self, "kernel", KernelKind(self.kernel or KernelKind.PARZEN))
            if self.bandwidth is None and self.lam is None:
                raise MdhError(f"{stat.value} needs a bandwidth or a lambda exponent")
        else:
            object.__setattr__(self, "kernel", None)
            object.__setattr__(self, "lam", None)
            object.__setattr__(self, "bandwidth", None)
        if stat is StatKind.MWNF and (self.pmax is None or self.pmax < 1):
            raise MdhError("mwnf needs pmax >= 1")
        if stat is not StatKind.MWNF:
            object.__setattr__(self, "pmax", None)

        if stat is StatKind.M99:
            if self.scheme is not None:
                raise MdhError("m99 uses its asymptotic normal p-value, not a bootstrap")
        else:
            scheme = default_scheme(stat) if self.scheme is None else Scheme(self.scheme)
            aux_ok = stat in (StatKind.MN, StatKind.TN)
            if (scheme is Scheme.AUX) != aux_ok:
                raise MdhError(f"scheme {scheme.value} cannot calibrate {stat.value}")
            object.__setattr__(self, "scheme", scheme)
        if self.reps < 1:
            raise MdhError("reps must be positive")
        if self.ln < 0:
            raise MdhError("ln must be nonnegative")

    @property
    def label(self) -> str:
        s = self.stat
        if s in (StatKind.MN, StatKind.M99, StatKind.TN):
            name = {StatKind.MN: "M_n", StatKind.M99: "M_99", StatKind.TN: "T_n"}[s]
            if self.bandwidth is not None:
                bw = f"p={self.bandwidth:g}"
            else:
                bw = f"lambda={_fraction_label(self.lam)}"
                if self.bandwidth_scale != 1.0:
                    bw += f",c={self.bandwidth_scale:g}"
            label = f"{name} ({self.kernel.short}) {bw}"
            if s is not StatKind.M99:
                label += f" ln={self.ln:g}"
            return label
        if s is StatKind.MWNF:
            label = f"M^F_wn p={self.pmax}"
            return label if self.scheme is Scheme.MAMMEN else f"{label} ({self.scheme.value})"
        label = "D^2_n"
        if self.scheme is not Scheme.RADEMACHER:
            label += f" ({self.scheme.value})"
        return label if self.normalized else label + " (unnormalized)"

    def kernel_for(self, n: int) -> KernelSpec:
        return make_kernel(self.kernel, n, self.lam, self.bandwidth_scale, self.bandwidth)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["stat"] = self.stat.value
        d["kernel"] = self.kernel.value if self.kernel else None
        d["scheme"] = self.scheme.value if self.scheme else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StatConfig":
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        if "boot" in d:
            d["scheme"] = d.pop("boot")
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise MdhError(f"unknown statistic config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class TestReport:
    statistic: str
    label: str
    value: float
    pvalue: float
    n: int
    level: float
    reject: bool
    seed: int
    config: dict = field(default_factory=dict)
    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return asdict(self)


def compute_pvalue(x, cfg: StatConfig, seed: int = 0) -> tuple[float, float]:
    """Observed statistic and its p-value under ``cfg``."""
    x = as_series(x, min_length=3)
    if cfg.stat is StatKind.M99:
        if np.ptp(x) == 0.0:
            # no variation, no evidence against the null
            return 0.0, 1.0
        value = stat_m99(x, cfg.kernel_for(x.size)).value
        return value, float(norm.sf(value))
    boot = BootstrapConfig(cfg.scheme, cfg.reps, cfg.ln, seed)
    if cfg.stat is StatKind.MN:
        res = boot_mn(x, cfg.kernel_for(x.size), boot)
    elif cfg.stat is StatKind.TN:
        res = boot_tn(x, cfg.kernel_for(x.size), boot)
    else:
        res = boot_multiplier(x, cfg.stat, boot, pmax=cfg.pmax, normalized=cfg.normalized)
    return res.observed, res.pvalue


def run_test(x, cfg: StatConfig, *, seed: int = 0, level: float = 0.05) -> TestReport:
    x = as_series(x, min_length=3)
    value, p = compute_pvalue(x, cfg, seed)
    config = cfg.to_dict()
    if cfg.kernel is not None:
        config["effective_bandwidth"] = cfg.kernel_for(x.size).bandwidth
    return TestReport(
        statistic=cfg.stat.value,
        label=cfg.label,
        value=value,
        pvalue=p,
        n=x.size,
        level=level,
        reject=p <= level,
        seed=seed,
        config=config,
    )


@dataclass(frozen=True)
class CorrelogramRow:
    """One lag of the correlogram.

    ``crit`` is the bootstrap critical value for ``amdcf``; ``adcf_crit``
    the one for ``adcf``.
    """

    lag: int
    acf: float
    adcf: float
    amdcf: float
    crit: float
    adcf_crit: float


def acf(x, lags) -> np.ndarray:
    """Sample autocorrelations ``sum xc_t xc_{t-j} / sum xc_t^2``."""
    x = as_series(x)
    xc = x - x.mean()
    denom = float(xc @ xc)
    if denom == 0.0:
        return np.zeros(len(lags))
    return np.array([float(xc[j:] @ xc[: x.size - j]) / denom for j in lags])


def correlogram(x, max_lag: int, *, reps: int = 499, ln: float = 0.0, seed: int = 0,
                level: float = 0.05, simultaneous: bool = False) -> list[CorrelogramRow]:
    """ACF, ADCF and AMDCF with wild-bootstrap critical values.

    The bootstrap replaces each lag's V-statistic sum by the quadratic form
    in auxiliary multipliers (i.i.d. for ``ln = 0``, AR(1) otherwise), then
    maps it through the same normalization as the observed measure.
    Critical values are pointwise ``1 - level`` quantiles, or, with
    ``simultaneous=True``, the quantile of the maximum over lags.
    """
    x = as_series(x, min_length=3)
    n = x.size
    if not 1 <= max_lag <= n - 2:
        raise MdhError(f"max_lag must be in [1, {n - 2}], got {max_lag}")
    lags = np.arange(1, max_lag + 1)
    mom = moment_estimates(x)
    mdc_denom = mom.r1 * math.sqrt(mom.dvar0)

    rho = acf(x, lags)
    amdcf = np.sqrt([normalized_mdc2(v, mom) for v in mdd2_lags(x, lags)])
    if mom.dvar0 > 0:
        adcf = np.sqrt(np.clip(dcov2_lags(x, lags) / mom.dvar0, 0.0, 1.0))
    else:
        adcf = np.zeros(max_lag)

    W = aux_matrix(n, BootstrapConfig(Scheme.AUX, reps, ln, seed))
    dist = distance_matrix(x)
    boot_amdcf = np.zeros((max_lag, reps))
    boot_adcf = np.zeros((max_lag, reps))
    for i, j in enumerate(lags):
        m = n - j
        A = double_center(dist[:m, :m])
        resp = x[j:]
        Wj = W[j:, :]
        Z = (resp - resp.mean())[:, None] * Wj
        mdd_star = -np.einsum("ij,ij->j", Z, A @ Z) / m**2
        H = double_center(dist[j:, j:]) * A
        dcov_star = np.einsum("ij,ij->j", Wj, H @ Wj) / m**2
        if mdc_denom > 0:
            boot_amdcf[i] = np.sqrt(np.clip(mdd_star / mdc_denom, 0.0, 1.0))
        if mom.dvar0 > 0:
            boot_adcf[i] = np.sqrt(np.clip(dcov_star / mom.dvar0, 0.0, 1.0))

    q = 1.0 - level
    if simultaneous:
        crit = np.full(max_lag, np.quantile(boot_amdcf.max(axis=0), q))
        adcf_crit = np.full(max_lag, np.quantile(boot_adcf.max(axis=0), q))
    else:
        crit = np.quantile(boot_amdcf, q, axis=1)
        adcf_crit = np.quantile(boot_adcf, q, axis=1)

    return [
        CorrelogramRow(int(j), float(rho[i]), float(adcf[i]), float(amdcf[i]),
                       float(crit[i]), float(adcf_crit[i]))
        for i, j in enumerate(lags)
    ]
