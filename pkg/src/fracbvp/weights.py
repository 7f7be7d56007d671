"""Product-integration weights for the predictor-corrector schemes.

Every weight is an integral of the kernel ``(t_{n+1} - tau)^(alpha-1)``
against a Lagrange basis polynomial over one panel of a uniform grid. With
the panel-local variable ``v = (t_{j+1} - tau) / h`` each of them is

    h**alpha * sum_m c_m * I_m(k),   I_m(k) = int_0^1 (k + v)**(alpha-1) v**m dv,

where ``k = n - j`` is the panel's distance from the target node. The
moments have elementary antiderivatives; for distant panels those
differences cancel badly, so a convergent binomial series is used there
instead. Weights never carry the ``1/Gamma(alpha)`` factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import FractionalOrder, UniformGrid

__all__ = [
    "WeightTable",
    "linear_corrector_weights",
    "linear_predictor_weights",
    "panel_moments",
    "quadratic_corrector_weights",
    "quadratic_predictor_weights",
    "weight_table",
]

# below this distance the antiderivative form loses at most ~k**2 ulps
_SERIES_FROM = 10
_SERIES_TERMS = 24


def _order(alpha) -> float:
    return float(alpha.value if isinstance(alpha, FractionalOrder) else alpha)


def panel_moments(k, alpha: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Moments ``I_0, I_1, I_2`` of ``(k + v)**(alpha - 1)`` on ``[0, 1]``.

    ``k`` is a non-negative integer or integer array.
    """
    k = np.asarray(k, dtype=float)
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    am1 = alpha - 1.0
    out = np.empty((3,) + k.shape)

    at0 = k == 0
    out[:, at0] = (1.0 / np.array([alpha, alpha + 1.0, alpha + 2.0]))[:, None]

    near = (k > 0) & (k < _SERIES_FROM)
    if near.any():
        kn = k[near]
        # P_p = int_k^{k+1} u^(alpha-1+p) du, differences taken via expm1/log1p
        lg = np.log1p(1.0 / kn)
        P = [kn ** (alpha + p) * np.expm1((alpha + p) * lg) / (alpha + p) for p in range(3)]
        out[0, near] = P[0]
        out[1, near] = P[1] - kn * P[0]
        out[2, near] = P[2] - 2.0 * kn * P[1] + kn * kn * P[0]

    far = k >= _SERIES_FROM
    if far.any():
        kf = k[far]
        inv = 1.0 / kf
        acc = np.zeros((3, kf.size))
        binom = 1.0
        ipow = np.ones_like(kf)
        for i in range(_SERIES_TERMS):
            for m in range(3):
                acc[m] += (binom / (m + i + 1)) * ipow
            binom *= (am1 - i) / (i + 1)
            ipow = ipow * inv
        out[:, far] = acc * kf ** am1

    if scalar:
        return out[0, 0], out[1, 0], out[2, 0]
    return out[0], out[1], out[2]


def _check_panel(n: int, j: int, grid: UniformGrid):
    if not 0 <= j <= n <= grid.N - 1:
        raise IndexError(f"need 0 <= j <= n <= N-1, got n={n}, j={j}, N={grid.N}")


def linear_corrector_weights(n: int, j: int, alpha, grid: UniformGrid) -> tuple[float, float]:
    """Weights ``(B1, B2)`` of ``f_j`` and ``f_{j+1}`` on panel ``j`` for node ``n+1``."""
    _check_panel(n, j, grid)
    a = _order(alpha)
    I0, I1, _ = panel_moments(n - j, a)
    s = grid.h ** a
    return float(s * I1), float(s * (I0 - I1))


def linear_predictor_weights(n: int, alpha, grid: UniformGrid) -> tuple[float, float]:
    """Extrapolation weights ``(b1, b2)`` of ``f_{n-1}`` and ``f_n`` over ``[t_n, t_{n+1}]``."""
    if not 1 <= n <= grid.N - 1:
        raise IndexError(f"linear predictor needs 1 <= n <= N-1, got n={n}")
    a = _order(alpha)
    s = grid.h ** a
    I0, I1 = 1.0 / a, 1.0 / (a + 1.0)
    return -s * (I0 - I1), s * (2.0 * I0 - I1)


def quadratic_corrector_weights(n: int, j: int, alpha, grid: UniformGrid) -> tuple[float, float, float]:
    """Quadratic panel weights ``(A1, A2, A3)`` for node ``n+1``.

    For ``j = 0`` the stencil is ``{t_0, t_{1/2}, t_1}``; otherwise it is
    ``{t_{j-1}, t_j, t_{j+1}}``. The triple is ordered left to right.
    """
    _check_panel(n, j, grid)
    a = _order(alpha)
    I0, I1, I2 = panel_moments(n - j, a)
    s = grid.h ** a
    if j == 0:
        return (float(s * (2 * I2 - I1)),
                float(s * (4 * I1 - 4 * I2)),
                float(s * (2 * I2 - 3 * I1 + I0)))
    return (float(s * (I2 - I1) / 2),
            float(s * (2 * I1 - I2)),
            float(s * (I2 - 3 * I1 + 2 * I0) / 2))


def quadratic_predictor_weights(n: int, alpha, grid: UniformGrid) -> tuple[float, float, float]:
    """Extrapolation weights ``(a1, a2, a3)`` of ``f_{n-2}, f_{n-1}, f_n``."""
    if not 2 <= n <= grid.N - 1:
        raise IndexError(f"quadratic predictor needs 2 <= n <= N-1, got n={n}")
    a = _order(alpha)
    s = grid.h ** a
    I0, I1, I2 = 1.0 / a, 1.0 / (a + 1.0), 1.0 / (a + 2.0)
    return (s * (I2 - 3 * I1 + 2 * I0) / 2,
            -s * (I2 - 4 * I1 + 3 * I0),
            s * (I2 - 5 * I1 + 6 * I0) / 2)


@dataclass(frozen=True, eq=False)
class WeightTable:
    """All weights of one order on one grid, indexed by panel distance ``k``.

    Linear: ``B1[k], B2[k]`` and predictor ``b = (b1, b2)``.
    Quadratic: interior ``A1[k], A2[k], A3[k]`` (valid for ``k <= N-2``),
    first-panel ``A0[:, n]`` for target node ``n+1`` and predictor
    ``a = (a1, a2, a3)``.
    """

    alpha: float
    grid: UniformGrid
    B1: np.ndarray
    B2: np.ndarray
    b: tuple[float, float]
    A1: np.ndarray
    A2: np.ndarray
    A3: np.ndarray
    A0: np.ndarray
    a: tuple[float, float, float]

    @property
    def panel_sum(self) -> np.ndarray:
        """Total linear weight reaching node ``n+1``, for ``n = 0..N-1``."""
        w = self.B1 + self.B2
        return np.cumsum(w[: self.grid.N])


def _build(alpha: float, grid: UniformGrid) -> WeightTable:
    N = grid.N
    k = np.arange(N + 1)
    I0, I1, I2 = panel_moments(k, alpha)
    s = grid.h ** alpha
    B1 = s * I1
    B2 = s * (I0 - I1)
    A1 = s * (I2 - I1) / 2
    A2 = s * (2 * I1 - I2)
    A3 = s * (I2 - 3 * I1 + 2 * I0) / 2
    A0 = np.vstack([s * (2 * I2 - I1), s * (4 * I1 - 4 * I2), s * (2 * I2 - 3 * I1 + I0)])
    p0, p1, p2 = 1.0 / alpha, 1.0 / (alpha + 1.0), 1.0 / (alpha + 2.0)
    b = (-s * (p0 - p1), s * (2 * p0 - p1))
    a = (s * (p2 - 3 * p1 + 2 * p0) / 2, -s * (p2 - 4 * p1 + 3 * p0), s * (p2 - 5 * p1 + 6 * p0) / 2)
    for arr in (B1, B2, A1, A2, A3, A0):
        arr.setflags(write=False)
    return WeightTable(alpha, grid, B1, B2, b, A1, A2, A3, A0, a)


@lru_cache(maxsize=256)
def _cached(alpha: float, a: float, b: float, N: int) -> WeightTable:
    return _build(alpha, UniformGrid(a, b, N))


def weight_table(alpha, grid: UniformGrid) -> WeightTable:
    """Weight table for ``alpha`` on ``grid`` (memoised, read-only arrays)."""
    return _cached(_order(alpha), float(grid.a), float(grid.b), grid.N)
