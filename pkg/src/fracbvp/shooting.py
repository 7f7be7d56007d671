"""Newton and Halley shooting on the right Robin condition.

Each iteration solves the base system for the current ``s_k``, reads the
boundary residual ``F(s_k) = a2 y_N + b2 z_N - gamma2`` off the final
node, and (unless converged) solves the sensitivity system(s) on the same
grid to get ``F_s`` and ``F_ss`` for the update.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal

from .core import RobinBC, UniformGrid
from .hpcm import SolutionGrid, SolverError, solve_system
from .transform import (
    DEFAULT_EPS,
    FractionalBVP,
    halley_sensitivity_system,
    newton_sensitivity_system,
    to_system,
)

__all__ = [
    "DivergenceError",
    "boundary_value",
    "ShootingConfig",
    "ShootingTrace",
    "halley_step",
    "newton_step",
    "residual",
    "run_shooting",
    "shoot",
]

log = logging.getLogger(__name__)

Method = Literal["newton", "halley"]

DENOMINATOR_FLOOR = 1e-14
GROWTH_LIMIT = 1e6


class DivergenceError(ArithmeticError):
    """A shooting update had a vanishing denominator."""


@dataclass(frozen=True)
class ShootingConfig:
    """Shooting controls: initial guess, iteration cap ``max_iter``, residual tolerance."""

    s0: float = 0.2
    max_iter: int = 10
    tol: float = 1e-10
    method: Method = "newton"
    scheme: str = "linear"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.method not in ("newton", "halley"):
            raise ValueError(f"unknown shooting method {self.method!r}")
        if self.scheme not in ("linear", "quadratic"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass
class ShootingTrace:
    """History of a shooting run.

    ``iterates`` holds ``(k, s_k, |F(s_k)|)`` for every residual evaluated.
    ``termination`` is ``"converged"``, ``"max_iter_reached"`` or
    ``"diverged"``; ``final_solution`` is the base solution of the best
    iterate. ``error`` keeps the exception that stopped a diverged run, if
    any (a :class:`SolverError` means the IVP solver itself failed).
    """

    iterates: list[tuple[int, float, float]] = field(default_factory=list)
    termination: str = "max_iter_reached"
    final_solution: SolutionGrid | None = None
    message: str = ""
    error: Exception | None = None

    @property
    def s(self) -> float:
        """Shooting value belonging to ``final_solution``."""
        return self.best[1]

    @property
    def best(self) -> tuple[int, float, float]:
        return min(self.iterates, key=lambda r: r[2])

    @property
    def iterations(self) -> int:
        """Number of updates performed (index of the last evaluated iterate)."""
        return self.iterates[-1][0] if self.iterates else 0

    @property
    def residuals(self) -> list[float]:
        return [r[2] for r in self.iterates]

    @property
    def converged(self) -> bool:
        return self.termination == "converged"


def boundary_value(grid_solution: SolutionGrid, bc: RobinBC) -> float:
    """``a2 y_N + b2 z_N``; ``z`` is the last component (it stands in for ``y'``).

    Applied to a sensitivity solution this is ``F_s`` (or ``F_ss``).
    """
    final = grid_solution.final
    return bc.a2 * final[0] + bc.b2 * final[-1]


def residual(grid_solution: SolutionGrid, bc: RobinBC) -> float:
    """Signed boundary residual ``a2 y_N + b2 z_N - gamma2``."""
    return boundary_value(grid_solution, bc) - bc.gamma2


def newton_step(s_k: float, F: float, F_s: float) -> float:
    """``s_k - F / F_s``."""
    if abs(F_s) < DENOMINATOR_FLOOR:
        raise DivergenceError(f"|F_s| = {abs(F_s):.3e} below {DENOMINATOR_FLOOR:g}")
    return s_k - F / F_s


def halley_step(s_k: float, F: float, F_s: float, F_ss: float) -> float:
    """``s_k - 2 F F_s / (2 F_s^2 - F F_ss)``."""
    den = 2.0 * F_s * F_s - F * F_ss
    if abs(den) < DENOMINATOR_FLOOR:
        raise DivergenceError(f"Halley denominator {den:.3e} below {DENOMINATOR_FLOOR:g}")
    return s_k - 2.0 * F * F_s / den


def run_shooting(
    solve: Callable[[float], SolutionGrid],
    derivatives: Callable[[float, SolutionGrid], tuple[float, ...]],
    bc: RobinBC,
    config: ShootingConfig,
) -> ShootingTrace:
    """Generic shooting loop.

    ``solve(s)`` returns the base solution for ``s``; ``derivatives(s, base)``
    returns ``(F_s,)`` for Newton or ``(F_s, F_ss)`` for Halley.
    """
    trace = ShootingTrace()
    s = float(config.s0)
    best_res, best_sol = math.inf, None
    first_res = None

    for k in range(config.max_iter + 1):
        try:
            base = solve(s)
        except SolverError as err:
            trace.termination, trace.message, trace.error = "diverged", str(err), err
            break
        F = residual(base, bc)
        res = abs(F)
        trace.iterates.append((k, s, res))
        log.debug("shoot k=%d s=%.16g |F|=%.3e", k, s, res)
        if not math.isfinite(res):
            trace.termination, trace.message = "diverged", "non-finite residual"
            break
        if res < best_res:
            best_res, best_sol = res, base
        if first_res is None:
            first_res = res
        elif res > GROWTH_LIMIT * max(first_res, 1e-300):
            trace.termination, trace.message = "diverged", "residual grew past the growth limit"
            break
        if res <= config.tol:
            trace.termination = "converged"
            break
        if k == config.max_iter:
            trace.termination = "max_iter_reached"
            break
        try:
            d = derivatives(s, base)
            if config.method == "newton":
                s = newton_step(s, F, d[0])
            else:
                s = halley_step(s, F, d[0], d[1])
        except (DivergenceError, SolverError) as err:
            trace.termination, trace.message, trace.error = "diverged", str(err), err
            break
        if not math.isfinite(s):
            trace.termination, trace.message = "diverged", "non-finite shooting value"
            break

    trace.final_solution = best_sol
    return trace


def shoot(problem: FractionalBVP, grid: UniformGrid, config: ShootingConfig,
          *, eps: float = DEFAULT_EPS, parameter: str = "slope") -> ShootingTrace:
    """Find the shooting value satisfying the right Robin condition.

    ``parameter`` selects what ``s`` stands for: ``"slope"`` (``y'(0)``)
    or ``"value"`` (``y(0)``).
    """
    problem.require(config.method)
    bc, scheme = problem.bc, config.scheme
    if grid.a != 0:
        raise ValueError("problems are posed on [0, b]")

    def solve(s):
        return solve_system(to_system(problem, s, eps, parameter), grid, scheme)

    def derivatives(s, base):
        sens = solve_system(newton_sensitivity_system(problem, base, s, eps, parameter), grid, scheme)
        F_s = boundary_value(sens, bc)
        if config.method == "newton":
            return (F_s,)
        sens2 = solve_system(halley_sensitivity_system(problem, base, sens, s, eps), grid, scheme)
        return F_s, boundary_value(sens2, bc)

    return run_shooting(solve, derivatives, bc, config)
