"""Lag-window kernels and bandwidth rule ``p = c * n**lambda``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._errors import BadBandwidthParams


class KernelKind(str, Enum):
    PARZEN = "parzen"
    BARTLETT = "bartlett"

    @property
    def short(self) -> str:
        return {"parzen": "Par", "bartlett": "Bar"}[self.value]


def bartlett(z):
    z = np.abs(np.asarray(z, dtype=float))
    return np.where(z <= 1.0, 1.0 - z, 0.0)


def parzen(z):
    z = np.abs(np.asarray(z, dtype=float))
    inner = 1.0 - 6.0 * z**2 + 6.0 * z**3
    outer = 2.0 * (1.0 - z) ** 3
    return np.where(z <= 0.5, inner, np.where(z <= 1.0, outer, 0.0))


_KERNELS = {KernelKind.PARZEN: parzen, KernelKind.BARTLETT: bartlett}


@dataclass(frozen=True)
class KernelSpec:
    """A kernel together with its (real-valued) bandwidth ``p``."""

    kind: KernelKind
    bandwidth: float

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        if not (self.bandwidth > 0 and math.isfinite(self.bandwidth)):
            raise BadBandwidthParams(f"bandwidth must be positive, got {self.bandwidth}")

    def __call__(self, z):
        return _KERNELS[self.kind](z)

    def weights(self, lags) -> np.ndarray:
        """``k(j / p)`` for each lag ``j``."""
        return self(np.asarray(lags, dtype=float) / self.bandwidth)

    def max_lag(self, limit: int) -> int:
        """Largest lag ``<= limit`` with a possibly nonzero weight.

        Both kernels vanish for ``|z| >= 1``, so only ``j < p`` contribute.
        """
        return max(0, min(int(limit), math.ceil(self.bandwidth) - 1))


def kernel_eval(spec: KernelSpec, z):
    out = spec(z)
    return float(out) if np.ndim(out) == 0 else out


def bandwidth(n: int, lam: float, c: float = 1.0) -> float:
    """Bandwidth ``c * n**lam``, left unrounded."""
    if n < 1 or not (0.0 < lam < 1.0) or not c > 0:
        raise BadBandwidthParams(f"need n >= 1, 0 < lambda < 1, c > 0; got n={n}, lambda={lam}, c={c}")
    return float(c * n**lam)


def make_kernel(kind: str | KernelKind, n: int, lam: float | None = None, c: float = 1.0,
                p: float | None = None) -> KernelSpec:
    """Kernel from either a raw bandwidth ``p`` or the rule ``c * n**lam``."""
    if p is None:
        if lam is None:
            raise BadBandwidthParams("either a bandwidth or a lambda exponent is required")
        p = bandwidth(n, lam, c)
    return KernelSpec(KernelKind(kind), float(p))
