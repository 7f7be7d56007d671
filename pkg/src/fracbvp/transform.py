"""Rewriting a two-point fractional BVP as systems of initial value problems.

For ``D^a2 y = f(t, y, D^a1 y)`` with Robin data, the unknown initial
slope (or value) ``s`` becomes a parameter of an initial value system:

* ``0 < a1 < 1``: ``(y, w, z)`` with orders ``(a1, 1 - a1, a2 - 1)``,
  ``w = D^a1 y`` and ``z = y'``.
* ``a1 = 1``: the derivative term is regularised to order ``1 - eps``;
  the reduced system ``(y, z)`` has orders ``(1 - eps, a2 - 1)``.

The sensitivity systems obtained by differentiating in ``s`` once or twice
are built here too; their coefficients are frozen along a previously
computed base trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .core import FractionalOrder, RobinBC
from .hpcm import FIVPSystem, SolutionGrid

__all__ = [
    "FractionalBVP",
    "MissingPartialError",
    "halley_sensitivity_system",
    "initial_state",
    "newton_sensitivity_system",
    "to_system",
    "to_system_case1",
    "to_system_case2_full",
    "to_system_case2_reduced",
]

Scalar3 = Callable[[float, float, float], float]
Parameter = Literal["slope", "value"]

DEFAULT_EPS = 1e-10


class MissingPartialError(ValueError):
    """A shooting method needs a partial derivative the problem does not supply."""


@dataclass(frozen=True, eq=False)
class FractionalBVP:
    """``D^alpha2 y = f(t, y, w)`` on ``[0, b]`` with ``w = D^alpha1 y`` and Robin data.

    ``f_y``, ``f_w`` are needed for Newton shooting; Halley additionally
    needs ``f_yy``, ``f_ww`` and ``f_wy``. All callables take ``(t, y, w)``.
    """

    alpha1: float
    alpha2: float
    f: Scalar3
    bc: RobinBC
    b: float = 1.0
    f_y: Scalar3 | None = None
    f_w: Scalar3 | None = None
    f_yy: Scalar3 | None = None
    f_ww: Scalar3 | None = None
    f_wy: Scalar3 | None = None

    def __post_init__(self):
        a1 = FractionalOrder.unit(float(getattr(self.alpha1, "value", self.alpha1))).value
        a2 = FractionalOrder.superunit(float(getattr(self.alpha2, "value", self.alpha2))).value
        if not self.b > 0:
            raise ValueError("right endpoint must be positive")
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)

    @property
    def single_term(self) -> bool:
        """True when ``alpha1 == 1``, i.e. ``f`` depends on ``y'``."""
        return self.alpha1 == 1.0

    def require(self, method: str):
        names = ["f_y", "f_w"] + (["f_yy", "f_ww", "f_wy"] if method == "halley" else [])
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise MissingPartialError(f"{method} shooting needs {', '.join(missing)}")


def initial_state(bc: RobinBC, s: float, parameter: Parameter = "slope") -> tuple[float, float]:
    """``(y(0), y'(0))`` satisfying the left Robin condition for shooting value ``s``.

    ``parameter="slope"`` treats ``s`` as ``y'(0)`` (needs ``a1 != 0``);
    ``"value"`` treats it as ``y(0)`` (needs ``b1 != 0``).
    """
    if parameter == "slope":
        if bc.a1 == 0:
            raise ValueError("slope shooting divides by a1 = 0; shoot on the value "
                             "(parameter='value', needs b1 != 0) instead")
        return (bc.gamma1 - bc.b1 * s) / bc.a1, float(s)
    if parameter == "value":
        if bc.b1 == 0:
            raise ValueError("value shooting divides by b1 = 0; shoot on the slope instead")
        return float(s), (bc.gamma1 - bc.a1 * s) / bc.b1
    raise ValueError(f"unknown shooting parameter {parameter!r}")


def _ic_sensitivity(bc: RobinBC, parameter: Parameter) -> tuple[float, float]:
    if parameter == "slope":
        return -bc.b1 / bc.a1, 1.0
    return 1.0, -bc.a1 / bc.b1


def to_system_case1(problem: FractionalBVP, s: float, parameter: Parameter = "slope") -> FIVPSystem:
    """Three-equation system ``(y, w, z)`` for ``0 < alpha1 < 1``."""
    a1 = problem.alpha1
    if not 0 < a1 < 1:
        raise ValueError(f"case 1 needs 0 < alpha1 < 1, got {a1}")
    y0, z0 = initial_state(problem.bc, s, parameter)
    f = problem.f

    def rhs(t, x):
        return (x[1], x[2], f(t, x[0], x[1]))

    return FIVPSystem((a1, 1.0 - a1, problem.alpha2 - 1.0), (y0, 0.0, z0), rhs, ("y", "w", "z"))


def _check_case2(problem: FractionalBVP, eps: float):
    if not problem.single_term:
        raise ValueError(f"case 2 needs alpha1 = 1, got {problem.alpha1}")
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def to_system_case2_reduced(problem: FractionalBVP, s: float, eps: float = DEFAULT_EPS,
                            parameter: Parameter = "slope") -> FIVPSystem:
    """Two-equation system ``(y, z)`` with orders ``(1 - eps, alpha2 - 1)``."""
    _check_case2(problem, eps)
    y0, z0 = initial_state(problem.bc, s, parameter)
    f = problem.f

    def rhs(t, x):
        return (x[1], f(t, x[0], x[1]))

    return FIVPSystem((1.0 - eps, problem.alpha2 - 1.0), (y0, z0), rhs, ("y", "z"))


def to_system_case2_full(problem: FractionalBVP, s: float, eps: float = DEFAULT_EPS,
                         parameter: Parameter = "slope") -> FIVPSystem:
    """Three-equation system ``(y, w, z)`` with orders ``(1 - eps, eps, alpha2 - 1)``."""
    _check_case2(problem, eps)
    y0, z0 = initial_state(problem.bc, s, parameter)
    f = problem.f

    def rhs(t, x):
        return (x[1], x[2], f(t, x[0], x[1]))

    return FIVPSystem((1.0 - eps, eps, problem.alpha2 - 1.0), (y0, 0.0, z0), rhs, ("y", "w", "z"))


def to_system(problem: FractionalBVP, s: float, eps: float = DEFAULT_EPS,
              parameter: Parameter = "slope") -> FIVPSystem:
    """Case 1 system when ``alpha1 < 1``, reduced case 2 system otherwise."""
    if problem.single_term:
        return to_system_case2_reduced(problem, s, eps, parameter)
    return to_system_case1(problem, s, parameter)


def _yw(x: np.ndarray) -> tuple[float, float]:
    # the derivative-like component is x[1] in both the 3- and 2-equation layouts
    return x[0], x[1]


def newton_sensitivity_system(problem: FractionalBVP, base: SolutionGrid, s: float = 0.0,
                              eps: float = DEFAULT_EPS, parameter: Parameter = "slope") -> FIVPSystem:
    """First-order sensitivity system ``d/ds`` of the base system.

    The right-hand side of the last equation is ``f_y y_s + f_w w_s`` with
    the partials evaluated along ``base``. ``s`` is accepted for symmetry
    with the base constructors; the system itself does not depend on it.
    """
    problem.require("newton")
    f_y, f_w = problem.f_y, problem.f_w
    ys0, zs0 = _ic_sensitivity(problem.bc, parameter)
    state_at = base.state_at

    if problem.single_term:
        def rhs(t, x):
            y, w = _yw(state_at(t))
            return (x[1], f_y(t, y, w) * x[0] + f_w(t, y, w) * x[1])

        return FIVPSystem((1.0 - eps, problem.alpha2 - 1.0), (ys0, zs0), rhs, ("y_s", "z_s"))

    def rhs(t, x):
        y, w = _yw(state_at(t))
        return (x[1], x[2], f_y(t, y, w) * x[0] + f_w(t, y, w) * x[1])

    a1 = problem.alpha1
    return FIVPSystem((a1, 1.0 - a1, problem.alpha2 - 1.0), (ys0, 0.0, zs0), rhs,
                      ("y_s", "w_s", "z_s"))


def halley_sensitivity_system(problem: FractionalBVP, base: SolutionGrid, first_sens: SolutionGrid,
                              s: float = 0.0, eps: float = DEFAULT_EPS) -> FIVPSystem:
    """Second-order sensitivity system ``d^2/ds^2`` of the base system.

    Last right-hand side: ``f_y y_ss + f_w w_ss + f_yy y_s^2 + 2 f_wy y_s w_s
    + f_ww w_s^2``, the full chain-rule second derivative. All initial
    values are zero.
    """
    problem.require("halley")
    f_y, f_w, f_yy, f_ww, f_wy = problem.f_y, problem.f_w, problem.f_yy, problem.f_ww, problem.f_wy
    base_at, sens_at = base.state_at, first_sens.state_at

    def forcing(t):
        y, w = _yw(base_at(t))
        ys, ws = _yw(sens_at(t))
        return (f_y(t, y, w), f_w(t, y, w),
                f_yy(t, y, w) * ys * ys + 2.0 * f_wy(t, y, w) * ys * ws + f_ww(t, y, w) * ws * ws)

    if problem.single_term:
        def rhs(t, x):
            cy, cw, g = forcing(t)
            return (x[1], cy * x[0] + cw * x[1] + g)

        return FIVPSystem((1.0 - eps, problem.alpha2 - 1.0), (0.0, 0.0), rhs, ("y_ss", "z_ss"))

    def rhs(t, x):
        cy, cw, g = forcing(t)
        return (x[1], x[2], cy * x[0] + cw * x[1] + g)

    a1 = problem.alpha1
    return FIVPSystem((a1, 1.0 - a1, problem.alpha2 - 1.0), (0.0, 0.0, 0.0), rhs,
                      ("y_ss", "w_ss", "z_ss"))
