"""
Simulation processes used in the size and power study.

====  =========================================================  =========
id    process                                                    null MDS
====  =========================================================  =========
1     i.i.d. N(0, 1)                                             yes
2-4   GARCH(1,1), (alpha, beta) = (.01,.97), (.09,.89), (.09,.90)  yes
5     stochastic volatility, sigma_t = .936 sigma_{t-1} + .32 u_t  yes
6     threshold AR(1)                                            no
7-8   bilinear, (alpha, beta) = (.15,.05), (.25,.25)             no
9     X_t = -0.6 e_{t-1}^2 + e_t                                 no
10    X_t = e_{t-1} e_{t-2} (e_{t-2} + e_t + 1)                  no
====  =========================================================  =========

Burn-in innovations come from a stream separate from the retained window's
innovations, so changing the burn-in length only changes the state the
window starts from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from ._errors import ExplosiveSample, MdhError

EXPLOSION_BOUND = 1e12

DEFAULT_PARAMS = {
    2: (0.01, 0.97),
    3: (0.09, 0.89),
    4: (0.09, 0.90),
    5: (0.936, 0.32),
    7: (0.15, 0.05),
    8: (0.25, 0.25),
}

NAMES = {
    1: "IID",
    2: "GARCH",
    3: "GARCH",
    4: "GARCH",
    5: "SV",
    6: "TAR",
    7: "Bilinear",
    8: "Bilinear",
    9: "NLMA",
    10: "NLMA",
}

MDS_IDS = frozenset({1, 2, 3, 4, 5})


def default_burnin(dgp_id: int) -> int:
    if dgp_id == 1:
        return 0
    if dgp_id in (9, 10):
        return 2
    return 500


@dataclass(frozen=True)
class DgpSpec:
    """A simulation process, its sample size and seed.

    ``params`` overrides the default ``(alpha, beta)`` pair where the
    process has one; ``burnin=None`` picks the default for the process.
    """

    id: int
    n: int = 100
    burnin: int | None = None
    seed: int = 0
    params: tuple[float, float] | None = None

    def __post_init__(self):
        if self.id not in NAMES:
            raise MdhError(f"unknown DGP id {self.id}; expected 1..10")
        if self.n < 2:
            raise MdhError(f"sample size must be at least 2, got {self.n}")
        if self.burnin is not None and self.burnin < 0:
            raise MdhError("burn-in must be nonnegative")
        if self.params is not None:
            object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @property
    def name(self) -> str:
        return NAMES[self.id]

    @property
    def label(self) -> str:
        return f"DGP{self.id}"

    @property
    def effective_burnin(self) -> int:
        return default_burnin(self.id) if self.burnin is None else self.burnin

    @property
    def effective_params(self) -> tuple[float, float] | None:
        return self.params if self.params is not None else DEFAULT_PARAMS.get(self.id)

    def with_n_seed(self, n: int, seed: int) -> "DgpSpec":
        return DgpSpec(self.id, n, self.burnin, seed, self.params)

    def generate(self) -> np.ndarray:
        return generate(self)


@dataclass(frozen=True)
class ConstantProcess:
    """Degenerate process returning a constant series (harness diagnostics)."""

    value: float = 0.0
    n: int = 100
    seed: int = 0
    id: int = 0

    @property
    def label(self) -> str:
        return "Constant"

    def with_n_seed(self, n: int, seed: int) -> "ConstantProcess":
        return ConstantProcess(self.value, n, seed, self.id)

    def generate(self) -> np.ndarray:
        return np.full(self.n, float(self.value))


def _innovations(seed: int, burnin: int, n: int, streams: int = 1):
    """``streams`` arrays of ``burnin + n`` standard normals.

    The first ``burnin`` entries of each come from the burn-in stream, the
    last ``n`` from the window stream.
    """
    window_ss, burn_ss = np.random.SeedSequence(seed).spawn(2)
    window = np.random.default_rng(window_ss).standard_normal((streams, n))
    burn = np.random.default_rng(burn_ss).standard_normal((streams, burnin))
    return np.concatenate([burn, window], axis=1)


def _garch(eps, alpha, beta):
    omega = 0.001
    persistence = alpha + beta
    s2 = omega / (1.0 - persistence) if persistence < 1 else omega
    x_prev = 0.0
    out = np.empty(eps.size)
    for t, e in enumerate(eps.tolist()):
        s2 = omega + alpha * x_prev * x_prev + beta * s2
        x_prev = e * math.sqrt(s2)
        out[t] = x_prev
    return out


def _sv(eps, u, alpha, beta):
    # sigma_t = alpha sigma_{t-1} + beta u_t from sigma_0 = 0
    sigma = lfilter([beta], [1.0, -alpha], u)
    return eps * np.exp(sigma)


def _tar(eps):
    x = 0.0
    out = np.empty(eps.size)
    for t, e in enumerate(eps.tolist()):
        x = (-1.5 * x if x < 0 else 0.5 * x) + e
        out[t] = x
    return out


def _bilinear(eps, alpha, beta):
    x1 = x2 = 0.0
    e1 = 0.0
    out = np.empty(eps.size)
    for t, e in enumerate(eps.tolist()):
        x = e + alpha * e1 * x1 + beta * e1 * x2
        out[t] = x
        x2, x1, e1 = x1, x, e
    return out


def generate(spec: DgpSpec) -> np.ndarray:
    """Simulate ``spec.n`` observations after discarding the burn-in."""
    n, burnin = spec.n, spec.effective_burnin
    params = spec.effective_params
    did = spec.id

    if did == 1:
        out = _innovations(spec.seed, burnin, n)[0]
    elif did in (2, 3, 4):
        out = _garch(_innovations(spec.seed, burnin, n)[0], *params)
    elif did == 5:
        eps, u = _innovations(spec.seed, burnin, n, streams=2)
        out = _sv(eps, u, *params)
    elif did == 6:
        out = _tar(_innovations(spec.seed, burnin, n)[0])
    elif did in (7, 8):
        out = _bilinear(_innovations(spec.seed, burnin, n)[0], *params)
    else:
        # at least two presample innovations supply e_{t-1}, e_{t-2}
        e = _innovations(spec.seed, max(burnin, 2), n)[0]
        if did == 9:
            out = -0.6 * e[1:-1] ** 2 + e[2:]
        else:
            out = e[1:-1] * e[:-2] * (e[:-2] + e[2:] + 1.0)

    out = out[-n:]
    if not np.all(np.isfinite(out)) or np.max(np.abs(out)) > EXPLOSION_BOUND:
        raise ExplosiveSample(f"{spec.label} produced a non-finite or explosive path")
    return out


def simulate(dgp_id: int, n: int, seed: int = 0, burnin: int | None = None, params=None) -> np.ndarray:
    return generate(DgpSpec(dgp_id, n, burnin, seed, params))
