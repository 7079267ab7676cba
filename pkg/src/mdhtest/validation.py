"""
Independent oracles for the test suite.

Nothing here shares code with the production estimators: the integral
oracles evaluate the Fourier-domain definitions by quadrature, the
product oracles use plain Python loops.

The integral oracles use composite Simpson on a truncated grid. The
integrands are removable-singular at the origin; below ``delta`` they are
replaced by their limits. Pairs of tied observations contribute a
non-decaying constant to the integrand, whose tail beyond the grid,
``2c / L``, is added analytically; oscillating terms are simply truncated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from ._errors import MdhError


@dataclass(frozen=True)
class QuadratureSpec:
    lower: float = -200.0
    upper: float = 200.0
    nodes: int = 200_001
    delta: float = 1e-4

    def __post_init__(self):
        if not self.lower < self.upper:
            raise MdhError("quadrature bounds must satisfy lower < upper")
        if self.nodes < 100:
            raise MdhError("need at least 100 quadrature nodes")
        if self.delta <= 0:
            raise MdhError("delta must be positive")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lower, self.upper, self.nodes)

    @property
    def symmetric(self) -> bool:
        return self.lower == -self.upper


def lemma1_check(x: float, spec: QuadratureSpec = QuadratureSpec(-1e4, 1e4, 1_000_001)) -> float:
    """Truncated ``int (1 - cos(z x)) / z^2 dz``; the full integral is ``pi |x|``."""
    z = spec.grid()
    f = np.empty_like(z)
    small = np.abs(z) < spec.delta
    zs = z[~small]
    f[~small] = (1.0 - np.cos(zs * x)) / (zs * zs)
    f[small] = 0.5 * x * x
    return float(simpson(f, x=z))


def _lagged(series, j):
    x = np.asarray(series, dtype=float)
    if not 1 <= j <= x.size - 2:
        raise MdhError(f"lag {j} invalid for length {x.size}")
    return x[j:], x[: x.size - j]


def _tie_matrix(y: np.ndarray) -> np.ndarray:
    return (y[:, None] == y[None, :]).astype(float)


def _tail(c: float, spec: QuadratureSpec) -> float:
    # int_{|v| > L} c / v^2 dv beyond each end of the grid
    return c * (1.0 / abs(spec.lower) + 1.0 / abs(spec.upper))


def _centered_cf(values: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rows ``e^{i v Y_t} - mean_t e^{i v Y_t}`` for each node ``v``."""
    e = np.exp(1j * np.outer(v, values))
    return e - e.mean(axis=1, keepdims=True)


def _weights(spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and Simpson weights, so that ``int f = sum w f(v)``."""
    v = spec.grid()
    return v, _simpson_weights(v)


def _simpson_weights(v: np.ndarray) -> np.ndarray:
    n = v.size
    if n % 2 == 0:
        raise MdhError("use an odd node count for weight-form Simpson")
    h = (v[-1] - v[0]) / (n - 1)
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * h / 3.0


def mdd2_integral_oracle(series, j: int, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """``(1/pi) int |sigma_j(v)|^2 / v^2 dv`` with the empirical

    ``sigma_j(v) = mean(X_t e^{i v X_{t-j}}) - mean(X_t) mean(e^{i v X_{t-j}})``.
    """
    resp, cond = _lagged(series, j)
    m = resp.size
    v, w = _weights(spec)
    small = np.abs(v) < spec.delta
    integrand = np.empty(v.size)
    for start in range(0, v.size, 20_000):
        sl = slice(start, start + 20_000)
        vv = v[sl]
        e = np.exp(1j * np.outer(vv, cond))
        sigma = (e * resp).mean(axis=1) - resp.mean() * e.mean(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand[sl] = np.abs(sigma) ** 2 / (vv * vv)
    # |sigma(v)|^2 / v^2 -> cov(X_t, X_{t-j})^2 as v -> 0
    cov = np.mean((resp - resp.mean()) * (cond - cond.mean()))
    integrand[small] = cov * cov
    rc = resp - resp.mean()
    c0 = float(rc @ _tie_matrix(cond) @ rc) / m**2
    return (float(w @ integrand) + _tail(c0, spec)) / math.pi


def _cf_gram(values: np.ndarray, spec: QuadratureSpec) -> np.ndarray:
    """``G_rl = int xi_r(u) conj(xi_l(u)) / u^2 du`` for centered CF rows ``xi``."""
    v, w = _weights(spec)
    small = np.abs(v) < spec.delta
    m = values.size
    G = np.zeros((m, m))
    vc = values - values.mean()
    for start in range(0, v.size, 20_000):
        sl = slice(start, start + 20_000)
        vv, ww = v[sl], w[sl]
        keep = ~small[sl]
        xi = _centered_cf(values, vv[keep])
        scaled = xi * (ww[keep] / vv[keep] ** 2)[:, None]
        G += (scaled.T @ xi.conj()).real
        G += np.outer(vc, vc) * ww[~keep].sum()
    E = _tie_matrix(values)
    tie_const = E - E.mean(axis=0) - E.mean(axis=1)[:, None] + E.mean()
    return G + _tail(1.0, spec) * tie_const


def dcov2_integral_oracle(series, j: int, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """``pi^-2 int int |sigma_j(u, v)|^2 / (u^2 v^2) du dv`` where

    ``sigma_j(u, v)`` is the empirical joint CF of ``(X_t, X_{t-j})``
    minus the product of the marginal CFs. The double integral separates
    into the contraction of two one-dimensional Gram matrices.
    """
    resp, cond = _lagged(series, j)
    m = resp.size
    G = _cf_gram(resp, spec)
    H = _cf_gram(cond, spec)
    return float(np.sum(G * H)) / (math.pi**2 * m**2)


def mdd2_product_oracle(series, j: int, response_power: int = 1) -> float:
    """``-m^-2 sum_{r,l} |c_r - c_l| (y_r - ybar)(y_l - ybar)``, looped.

    ``c`` are the conditioning values ``X_{t-j}`` and ``y`` the response
    values ``X_t ** response_power``.
    """
    x = [float(v) for v in series]
    n = len(x)
    if not 1 <= j <= n - 2:
        raise MdhError(f"lag {j} invalid for length {n}")
    y = [x[t] ** response_power for t in range(j, n)]
    c = [x[t - j] for t in range(j, n)]
    m = len(y)
    ybar = math.fsum(y) / m
    total = math.fsum(
        abs(c[r] - c[l]) * (y[r] - ybar) * (y[l] - ybar) for r in range(m) for l in range(m)
    )
    return -total / (m * m)


def dn2_loop_oracle(series, normalized: bool = True) -> float:
    """Generalized spectral statistic by explicit loops over lags and pairs."""
    x = [float(v) for v in series]
    n = len(x)
    terms = []
    for j in range(1, n - 1):
        m = n - j
        tail = x[j:]
        mean = math.fsum(tail) / m
        inner = math.fsum(
            (x[t] - mean) * (x[s] - mean) * math.exp(-0.5 * (x[t - j] - x[s - j]) ** 2)
            for t in range(j, n)
            for s in range(j, n)
        )
        weight = m / (j * math.pi) ** 2
        if normalized:
            weight /= m * m
        terms.append(weight * inner)
    return math.fsum(terms)
