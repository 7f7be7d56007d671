"""Predictor-corrector solvers for systems of Caputo initial value problems.

Each equation ``D^beta_i x_i = f_i(t, x)`` with ``0 < beta_i <= 1`` is
advanced through its Volterra form

    x_i(t_{n+1}) = x_i(0) + J^beta_i f_i(t_{n+1}),

with the history integral replaced by product integration of a linear
(second order) or quadratic (third order) interpolant of ``f``. All
equations share one time loop: predict every component, evaluate the
right-hand side on the predicted state, correct every component, evaluate
again (PECE).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .core import UniformGrid, gamma
from .weights import WeightTable, weight_table

__all__ = [
    "Equation",
    "FIVPSystem",
    "SolutionGrid",
    "SolverError",
    "solve_system",
    "starting_values",
    "starting_refinement",
]

Scheme = Literal["linear", "quadratic"]
SystemRHS = Callable[[float, np.ndarray], Sequence[float]]


class SolverError(RuntimeError):
    """A right-hand side produced a non-finite value."""

    def __init__(self, message: str, node: int | None = None):
        super().__init__(message)
        self.node = node


@dataclass(frozen=True)
class Equation:
    """One scalar equation ``D^order x_i = rhs(t, x)`` with ``x_i(0) = ic``."""

    order: float
    rhs: Callable[[float, np.ndarray], float]
    ic: float


@dataclass(frozen=True, eq=False)
class FIVPSystem:
    """A coupled system of Caputo initial value problems.

    ``rhs(t, x)`` returns the right-hand sides of all equations at once for
    the full state vector ``x``. Use :meth:`from_equations` to assemble a
    system from per-equation callables.
    """

    orders: tuple[float, ...]
    ics: tuple[float, ...]
    rhs: SystemRHS
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        orders = tuple(float(getattr(o, "value", o)) for o in self.orders)
        ics = tuple(float(c) for c in self.ics)
        if not orders:
            raise ValueError("a system needs at least one equation")
        if len(orders) != len(ics):
            raise ValueError("orders and initial conditions differ in length")
        for o in orders:
            if not 0 < o <= 1:
                raise ValueError(f"system orders must lie in (0, 1], got {o}")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "ics", ics)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"x{i}" for i in range(len(orders))))

    @classmethod
    def from_equations(cls, equations: Sequence[Equation], labels=()) -> FIVPSystem:
        eqs = tuple(equations)

        def rhs(t, x):
            return [eq.rhs(t, x) for eq in eqs]

        return cls(tuple(e.order for e in eqs), tuple(e.ic for e in eqs), rhs, tuple(labels))

    @property
    def dimension(self) -> int:
        return len(self.orders)


@dataclass(eq=False)
class SolutionGrid:
    """Nodal values of a solved system.

    ``values[i, j]`` approximates component ``i`` at ``t_j`` and
    ``rhs_cache[i, j]`` holds the right-hand side evaluated there. For the
    quadratic scheme the half-node state and right-hand side are kept in
    ``half`` and ``half_rhs``; ``start`` holds the fine-grid starting run
    (times, values) when one was made.
    """

    grid: UniformGrid
    values: np.ndarray
    rhs_cache: np.ndarray
    scheme: str
    labels: tuple[str, ...] = ()
    half: np.ndarray | None = None
    half_rhs: np.ndarray | None = None
    start: tuple[np.ndarray, np.ndarray] | None = None
    _lookup: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.values.setflags(write=False)
        self.rhs_cache.setflags(write=False)

    def component(self, key: int | str) -> np.ndarray:
        i = self.labels.index(key) if isinstance(key, str) else key
        return self.values[i]

    @property
    def final(self) -> np.ndarray:
        """State at ``t_N``."""
        return self.values[:, -1]

    def state_at(self, t: float) -> np.ndarray:
        """Stored state at a time the solver visited (grid, half or starting node)."""
        if not self._lookup:
            self._index()
        try:
            return self._lookup[float(t)]
        except KeyError:
            raise KeyError(f"no stored state at t = {t!r}") from None

    def _index(self):
        lookup = {}
        if self.start is not None:
            for tt, col in zip(self.start[0], self.start[1].T):
                lookup[float(tt)] = col
        if self.half is not None:
            lookup[float(self.grid.half_node)] = self.half
        for tt, col in zip(self.grid.nodes, self.values.T):
            lookup[float(tt)] = col
        self._lookup = lookup


def _eval(rhs: SystemRHS, t: float, x: np.ndarray, node) -> np.ndarray:
    f = np.asarray(rhs(t, x), dtype=float)
    if not np.all(np.isfinite(f)):
        raise SolverError(f"non-finite right-hand side at node {node} (t = {t:g})", node)
    return f


def starting_refinement(N: int) -> int:
    """Refinement factor of the fine starting run: ``max(8, ceil(sqrt(N)))`` rounded up to even."""
    R = max(8, math.ceil(math.sqrt(N)))
    return R + (R % 2)


def solve_system(system: FIVPSystem, grid: UniformGrid, scheme: Scheme = "linear") -> SolutionGrid:
    """Solve ``system`` on ``grid`` with the linear or quadratic PECE scheme.

    Raises
    ------
    SolverError
        If the right-hand side returns a non-finite value; ``err.node`` is
        the offending node index.
    """
    solvers = {"linear": _solve_linear, "quadratic": _solve_quadratic}
    if scheme not in solvers:
        raise ValueError(f"unknown scheme {scheme!r}")
    # overflow surfaces as a SolverError from _eval, not as a warning
    with np.errstate(over="ignore", invalid="ignore"):
        return solvers[scheme](system, grid)


def _tables(system: FIVPSystem, grid: UniformGrid) -> list[WeightTable]:
    return [weight_table(o, grid) for o in system.orders]


def _solve_linear(system: FIVPSystem, grid: UniformGrid) -> SolutionGrid:
    N, d = grid.N, system.dimension
    t = grid.nodes
    tabs = _tables(system, grid)
    inv_g = np.array([1.0 / gamma(o) for o in system.orders])
    ic = np.array(system.ics)
    B1 = np.vstack([w.B1 for w in tabs])
    B2 = np.vstack([w.B2 for w in tabs])
    b1 = np.array([w.b[0] for w in tabs])
    b2 = np.array([w.b[1] for w in tabs])
    B1_0, B2_0 = B1[:, 0], B2[:, 0]

    X = np.empty((d, N + 1))
    F = np.empty((d, N + 1))
    X[:, 0] = ic
    F[:, 0] = _eval(system.rhs, t[0], ic, 0)

    # first step: f_0 held constant over the panel, then two corrector sweeps
    h_pow = np.array([grid.h ** o / o for o in system.orders])
    xp = ic + inv_g * h_pow * F[:, 0]
    fp = _eval(system.rhs, t[1], xp, 1)
    for _ in range(2):
        xc = ic + inv_g * (B1_0 * F[:, 0] + B2_0 * fp)
        fp = _eval(system.rhs, t[1], xc, 1)
    X[:, 1] = xc
    F[:, 1] = fp

    for n in range(1, N):
        mem = (np.einsum("ij,ij->i", B1[:, n:0:-1], F[:, :n])
               + np.einsum("ij,ij->i", B2[:, n:0:-1], F[:, 1:n + 1]))
        xp = ic + inv_g * (mem + b1 * F[:, n - 1] + b2 * F[:, n])
        fp = _eval(system.rhs, t[n + 1], xp, n + 1)
        xc = ic + inv_g * (mem + B1_0 * F[:, n] + B2_0 * fp)
        X[:, n + 1] = xc
        F[:, n + 1] = _eval(system.rhs, t[n + 1], xc, n + 1)

    return SolutionGrid(grid, X, F, "linear", system.labels)


def starting_values(system: FIVPSystem, grid: UniformGrid):
    """States at ``t_{1/2}``, ``t_1`` and ``t_2`` for the quadratic scheme.

    The linear scheme is run on ``[t_0, t_2]`` with ``2R`` steps, ``R`` from
    :func:`starting_refinement`, so all three points are fine-grid nodes.

    Returns
    -------
    (x_half, x_1, x_2, fine) where ``fine`` is the fine-grid
    :class:`SolutionGrid`.
    """
    R = starting_refinement(grid.N)
    fine_grid = UniformGrid(grid.a, grid.node(2), 2 * R)
    fine = _solve_linear(system, fine_grid)
    V = fine.values
    return V[:, R // 2].copy(), V[:, R].copy(), V[:, 2 * R].copy(), fine


def _solve_quadratic(system: FIVPSystem, grid: UniformGrid) -> SolutionGrid:
    N, d = grid.N, system.dimension
    if N < 4:
        raise ValueError("the quadratic scheme needs N >= 4")
    t = grid.nodes
    tabs = _tables(system, grid)
    inv_g = np.array([1.0 / gamma(o) for o in system.orders])
    ic = np.array(system.ics)
    A1 = np.vstack([w.A1 for w in tabs])
    A2 = np.vstack([w.A2 for w in tabs])
    A3 = np.vstack([w.A3 for w in tabs])
    A0 = np.stack([w.A0 for w in tabs])  # (d, 3, N+1)
    pa = np.array([w.a for w in tabs])  # (d, 3)
    A1_0, A2_0, A3_0 = A1[:, 0], A2[:, 0], A3[:, 0]

    x_half, x1, x2, fine = starting_values(system, grid)

    X = np.empty((d, N + 1))
    F = np.empty((d, N + 1))
    X[:, 0] = ic
    X[:, 1] = x1
    X[:, 2] = x2
    F[:, 0] = _eval(system.rhs, t[0], ic, 0)
    f_half = _eval(system.rhs, grid.half_node, x_half, 0.5)
    F[:, 1] = _eval(system.rhs, t[1], x1, 1)
    F[:, 2] = _eval(system.rhs, t[2], x2, 2)

    for n in range(2, N):
        first = A0[:, 0, n] * F[:, 0] + A0[:, 1, n] * f_half + A0[:, 2, n] * F[:, 1]
        # interior panels j = 1..n-1 sit at distance k = n-j = n-1..1
        mem = (first
               + np.einsum("ij,ij->i", A1[:, n - 1:0:-1], F[:, 0:n - 1])
               + np.einsum("ij,ij->i", A2[:, n - 1:0:-1], F[:, 1:n])
               + np.einsum("ij,ij->i", A3[:, n - 1:0:-1], F[:, 2:n + 1]))
        pred = pa[:, 0] * F[:, n - 2] + pa[:, 1] * F[:, n - 1] + pa[:, 2] * F[:, n]
        xp = ic + inv_g * (mem + pred)
        fp = _eval(system.rhs, t[n + 1], xp, n + 1)
        xc = ic + inv_g * (mem + A1_0 * F[:, n - 1] + A2_0 * F[:, n] + A3_0 * fp)
        X[:, n + 1] = xc
        F[:, n + 1] = _eval(system.rhs, t[n + 1], xc, n + 1)

    return SolutionGrid(
        grid, X, F, "quadratic", system.labels,
        half=x_half, half_rhs=f_half,
        start=(fine.grid.nodes, fine.values),
    )
