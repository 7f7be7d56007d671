"""Explicit node-by-node scheme for linear single-term problems.

For ``D^a2 y = f(t) + c(t) y + b(t) y'`` the pair ``(y, z)`` with
``D^(1-eps) y = z`` and ``D^(a2-1) z = f + c y + b z`` is linear, so the
trapezoidal-type product integration can be solved for ``z_{n+1}`` in
closed form at every node. No predictor is needed.

The forcing term ``J^(a2-1) f`` is known before the march starts. By
default it is integrated adaptively (``f`` is a user function, often with
an integrable kink at ``t = 0``); ``forcing="weights"`` applies the
linear product weights to nodal samples instead.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .core import UniformGrid, gamma
from .hpcm import SolutionGrid, SolverError
from .problems import LinearFBVP
from .shooting import ShootingConfig, ShootingTrace, boundary_value, run_shooting
from .transform import initial_state
from .weights import weight_table

__all__ = ["SingularBracketError", "forcing_integral", "shoot_linear", "solve_linear_explicit"]

BRACKET_FLOOR = 1e-14


class SingularBracketError(SolverError):
    """The coefficient of ``z_{n+1}`` vanished."""


def _scaled_weights(order: float, grid: UniformGrid) -> tuple[np.ndarray, np.ndarray]:
    w = weight_table(order, grid)
    g = 1.0 / gamma(order)
    return w.B1 * g, w.B2 * g


def _sample(fn, t: np.ndarray) -> np.ndarray:
    return np.array([float(fn(tt)) for tt in t])


def forcing_integral(f, order: float, t: np.ndarray) -> np.ndarray:
    """``J^order f`` at the times ``t`` by adaptive quadrature.

    Each value is ``int_0^t (t - tau)^(order-1) f(tau) dtau / Gamma(order)``
    with the algebraic end-point weight handled by QUADPACK's QAWS rule.
    """
    g = 1.0 / gamma(order)
    out = np.zeros(len(t))
    for i, ti in enumerate(t):
        if ti > 0:
            val, _ = quad(f, 0.0, float(ti), weight="alg", wvar=(0.0, order - 1.0),
                          limit=200, epsabs=1e-15, epsrel=1e-13)
            out[i] = g * val
    return out


def _weights_integral(fvals: np.ndarray, B1: np.ndarray, B2: np.ndarray) -> np.ndarray:
    N = len(fvals) - 1
    out = np.zeros(N + 1)
    for n in range(N):
        k = slice(n, None, -1)
        out[n + 1] = B1[k] @ fvals[:n + 1] + B2[k] @ fvals[1:n + 2]
    return out


def _march(problem: LinearFBVP, grid: UniformGrid, y0: float, z0: float,
           fvals: np.ndarray, jf: np.ndarray) -> SolutionGrid:
    N = grid.N
    t = grid.nodes
    A1, A2 = _scaled_weights(1.0 - problem.eps, grid)
    B1, B2 = _scaled_weights(problem.alpha2 - 1.0, grid)
    c = _sample(problem.c, t)
    bb = _sample(problem.b, t)

    y = np.empty(N + 1)
    z = np.empty(N + 1)
    g = np.empty(N + 1)  # c y + b z at the nodes
    y[0], z[0] = y0, z0
    g[0] = c[0] * y0 + bb[0] * z0

    for n in range(N):
        # panels j = 0..n sit at distance k = n - j
        ka = slice(n, None, -1)
        a1, a2 = A1[ka], A2[ka]
        b1, b2 = B1[ka], B2[ka]
        # y_{n+1} = y_star + A2[0] z_{n+1}
        y_star = y0 + a1 @ z[:n + 1] + a2[:-1] @ z[1:n + 1]
        mem = b1 @ g[:n + 1] + b2[:-1] @ g[1:n + 1]
        den = 1.0 - B2[0] * (A2[0] * c[n + 1] + bb[n + 1])
        if abs(den) < BRACKET_FLOOR:
            raise SingularBracketError(f"z bracket {den:.3e} vanishes at node {n + 1}", n + 1)
        z[n + 1] = (z0 + jf[n + 1] + mem + B2[0] * c[n + 1] * y_star) / den
        y[n + 1] = y_star + A2[0] * z[n + 1]
        g[n + 1] = c[n + 1] * y[n + 1] + bb[n + 1] * z[n + 1]
        if not (np.isfinite(z[n + 1]) and np.isfinite(y[n + 1])):
            raise SolverError(f"non-finite value at node {n + 1}", n + 1)

    values = np.vstack([y, z])
    rhs = np.vstack([z, fvals + g])
    return SolutionGrid(grid, values, rhs, "linear_explicit", ("y", "z"))


def solve_linear_explicit(problem: LinearFBVP, grid: UniformGrid, s: float) -> SolutionGrid:
    """Solve the ``(y, z)`` system for initial value ``y(0) = s``.

    ``z(0)`` follows from the left Robin condition; ``problem.forcing``
    picks how ``J^(a2-1) f`` is evaluated.

    Raises
    ------
    SingularBracketError
        If ``1 - B2_0 (A2_0 c(t_{n+1}) + b(t_{n+1}))`` is below ``1e-14``.
    """
    if grid.N < 2:
        raise ValueError("the explicit scheme needs N >= 2")
    y0, z0 = initial_state(problem.bc, s, "value")
    fvals, jf = _forcing(problem, grid)
    return _march(problem, grid, y0, z0, fvals, jf)


def _forcing(problem: LinearFBVP, grid: UniformGrid) -> tuple[np.ndarray, np.ndarray]:
    fvals = _sample(problem.f, grid.nodes)
    order = problem.alpha2 - 1.0
    if problem.forcing == "quadrature":
        return fvals, forcing_integral(problem.f, order, grid.nodes)
    B1, B2 = _scaled_weights(order, grid)
    return fvals, _weights_integral(fvals, B1, B2)


def shoot_linear(problem: LinearFBVP, grid: UniformGrid, config: ShootingConfig) -> ShootingTrace:
    """Newton (or Halley) shooting on ``y(0)`` with the explicit scheme.

    The residual is affine in ``s``, so the sensitivity is the same scheme
    with ``f = 0`` and initial values ``(1, -a1/b1)``, and ``F_ss = 0``.
    """
    if grid.N < 2:
        raise ValueError("the explicit scheme needs N >= 2")
    bc = problem.bc
    zero = np.zeros(grid.N + 1)
    fvals, jf = _forcing(problem, grid)
    cache = {}

    def solve(s):
        y0, z0 = initial_state(bc, s, "value")
        return _march(problem, grid, y0, z0, fvals, jf)

    def derivatives(s, base):
        if "F_s" not in cache:
            sens = _march(problem, grid, 1.0, -bc.a1 / bc.b1, zero, zero)
            cache["F_s"] = boundary_value(sens, bc)
        return cache["F_s"], 0.0

    return run_shooting(solve, derivatives, bc, config)
