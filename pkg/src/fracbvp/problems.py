"""Registry of the five benchmark problems with known exact solutions.

Examples 1-3 are two-term nonlinear problems (``0 < alpha1 < 1``) shot on
the initial slope; Examples 4-5 are single-term linear problems
(``alpha1 = 1``) shot on the initial value. Boundary constants are always
recomputed from the exact solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .core import RobinBC, gamma, mittag_leffler
from .transform import FractionalBVP

__all__ = [
    "EXAMPLE_IDS",
    "ExampleProblem",
    "LinearFBVP",
    "build_example",
    "caputo_sine",
]

EXAMPLE_IDS = ("ex1", "ex2", "ex3", "ex4", "ex5")

DEFAULT_ORDERS = {
    "ex1": (0.4, 1.7),
    "ex2": (0.4, 1.7),
    "ex3": (0.4, 1.7),
    "ex4": (1.0, 1.5),
    "ex5": (1.0, 1.5),
}


@dataclass(frozen=True, eq=False)
class LinearFBVP:
    """``D^alpha2 y = f(t) + c(t) y + b(t) y'`` with Robin data (``b1 != 0``).

    ``forcing`` selects how the explicit scheme integrates ``f``:
    ``"quadrature"`` (adaptive, to near machine precision) or ``"weights"``
    (the scheme's own linear product weights on nodal samples).
    """

    alpha2: float
    f: Callable[[float], float]
    c: Callable[[float], float]
    b: Callable[[float], float]
    bc: RobinBC
    eps: float = 1e-10
    T: float = 1.0
    forcing: str = "quadrature"

    def __post_init__(self):
        if not 1 < self.alpha2 < 2:
            raise ValueError(f"alpha2 must lie in (1, 2), got {self.alpha2}")
        if self.bc.b1 == 0:
            raise ValueError("the explicit linear scheme shoots on y(0) and needs b1 != 0")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.forcing not in ("quadrature", "weights"):
            raise ValueError(f"unknown forcing rule {self.forcing!r}")

    def as_bvp(self) -> FractionalBVP:
        """The same problem in the general ``f(t, y, y')`` form."""
        f, c, b = self.f, self.c, self.b
        return FractionalBVP(
            1.0, self.alpha2,
            lambda t, y, w: f(t) + c(t) * y + b(t) * w,
            self.bc, self.T,
            f_y=lambda t, y, w: c(t), f_w=lambda t, y, w: b(t),
            f_yy=_zero3, f_ww=_zero3, f_wy=_zero3,
        )


@dataclass(frozen=True, eq=False)
class ExampleProblem:
    """A benchmark problem together with its exact solution.

    ``bvp`` is the general form used by the predictor-corrector path;
    ``linear`` is set for the linear examples. ``parameter`` says whether
    the shooting value is the initial slope or the initial value.
    """

    id: str
    bvp: FractionalBVP
    exact_solution: Callable
    exact_derivative: Callable
    alpha1: float
    alpha2: float
    parameter: str = "slope"
    linear: LinearFBVP | None = None
    caputo_alpha1: Callable | None = None
    caputo_alpha2: Callable | None = None

    @property
    def gammas(self) -> tuple[float, float]:
        return self.bvp.bc.gamma1, self.bvp.bc.gamma2

    @property
    def exact_shooting_value(self) -> float:
        if self.parameter == "slope":
            return float(self.exact_derivative(0.0))
        return float(self.exact_solution(0.0))


def _zero3(t, y, w):
    return 0.0


def _pw(t, p):
    # t**p with the t = 0 limit for p > 0
    return t ** p if t > 0 else 0.0


def caputo_sine(alpha: float, t, lam: float = 1.0):
    """Caputo derivative of ``sin(lam t)`` of order ``alpha`` (non-integer).

    Uses the Mittag-Leffler combination
    ``-i/2 (i lam)^m t^(m-alpha) [E_{1,m-alpha+1}(i lam t) - (-1)^m E_{1,m-alpha+1}(-i lam t)]``
    with ``m = ceil(alpha)``.
    """
    m = math.ceil(alpha)
    t_arr = np.asarray(t, dtype=float)
    beta = m - alpha + 1
    z = 1j * lam * t_arr
    comb = mittag_leffler(1.0, beta, z) - (-1) ** m * mittag_leffler(1.0, beta, -z)
    val = -0.5j * (1j * lam) ** m * np.where(t_arr > 0, t_arr, 0.0) ** (m - alpha) * comb
    out = np.real(val)
    return float(out) if np.ndim(out) == 0 else out


def build_example(id: str, alpha1: float | None = None, alpha2: float | None = None,
                  lam: float = 1.0) -> ExampleProblem:
    """Construct benchmark problem ``id`` (``"ex1"`` .. ``"ex5"``).

    Orders default to ``(0.4, 1.7)`` for Examples 1-3 and ``alpha2 = 1.5``
    for Examples 4-5 (where ``alpha1`` is always 1).
    """
    if id not in EXAMPLE_IDS:
        raise KeyError(f"unknown example {id!r}; choose from {', '.join(EXAMPLE_IDS)}")
    d1, d2 = DEFAULT_ORDERS[id]
    a1 = d1 if alpha1 is None else float(alpha1)
    a2 = d2 if alpha2 is None else float(alpha2)
    if id in ("ex4", "ex5") and a1 != 1.0:
        raise ValueError(f"{id} is a single-term problem; alpha1 must be 1")
    return _BUILDERS[id](a1, a2, lam)


def _robin_11(y, dy, T=1.0):
    # y(0) + y'(0) = gamma1, y(T) + y'(T) = gamma2
    return RobinBC(1.0, 1.0, y(0.0) + dy(0.0), 1.0, 1.0, y(T) + dy(T))


def _ex1(a1, a2, lam):
    c2 = gamma(5) / gamma(5 - a2)
    c1 = gamma(5) / gamma(5 - a1)

    @lru_cache(maxsize=None)
    def g(t):
        return c2 * _pw(t, 4 - a2) - c1 * _pw(t, 4 - a1) - t ** 8

    def y(t):
        return t ** 4

    def dy(t):
        return 4 * t ** 3

    bvp = FractionalBVP(
        a1, a2, lambda t, y_, w: g(t) + y_ * y_ + w, _robin_11(y, dy),
        f_y=lambda t, y_, w: 2.0 * y_, f_w=lambda t, y_, w: 1.0,
        f_yy=lambda t, y_, w: 2.0, f_ww=_zero3, f_wy=_zero3,
    )
    return ExampleProblem("ex1", bvp, y, dy, a1, a2,
                          caputo_alpha1=lambda t: c1 * _pw(t, 4 - a1),
                          caputo_alpha2=lambda t: c2 * _pw(t, 4 - a2))


def _ex2(a1, a2, lam):
    def y(t):
        lt = lam * t
        return math.exp(lt) - (1 + lt + lt ** 2 / 2 + lt ** 3 / 6)

    def dy(t):
        lt = lam * t
        return lam * (math.exp(lt) - (1 + lt + lt ** 2 / 2))

    def B(t):
        return (lam * _pw(t, 1 - a1) * mittag_leffler(1, 2 - a1, lam * t)
                - (lam * gamma(2) / gamma(2 - a1) * _pw(t, 1 - a1)
                   + lam ** 2 * gamma(3) / (2 * gamma(3 - a1)) * _pw(t, 2 - a1)
                   + lam ** 3 * gamma(4) / (6 * gamma(4 - a1)) * _pw(t, 3 - a1)))

    def D2(t):
        return (lam ** 2 * _pw(t, 2 - a2) * mittag_leffler(1, 3 - a2, lam * t)
                - (lam ** 2 * gamma(3) / (2 * gamma(3 - a2)) * _pw(t, 2 - a2)
                   + lam ** 3 * gamma(4) / (6 * gamma(4 - a2)) * _pw(t, 3 - a2)))

    @lru_cache(maxsize=None)
    def g(t):
        A = y(t)
        return D2(t) - A * A - t * B(t)

    bvp = FractionalBVP(
        a1, a2, lambda t, y_, w: g(t) + y_ * y_ + t * w, _robin_11(y, dy),
        f_y=lambda t, y_, w: 2.0 * y_, f_w=lambda t, y_, w: t,
        f_yy=lambda t, y_, w: 2.0, f_ww=_zero3, f_wy=_zero3,
    )
    return ExampleProblem("ex2", bvp, y, dy, a1, a2, caputo_alpha1=B, caputo_alpha2=D2)


def _sine_parts(lam):
    def y(t):
        return math.sin(lam * t) - t + t ** 3 / 6

    def dy(t):
        return lam * math.cos(lam * t) - 1 + t ** 2 / 2

    def caputo(alpha):
        # D^alpha of y for non-integer alpha in (0, 2); D^alpha t vanishes when alpha > 1
        lin = gamma(2) / gamma(2 - alpha) if alpha < 1 else 0.0
        cub = gamma(4) / (6 * gamma(4 - alpha))

        def d(t):
            return caputo_sine(alpha, t, lam) - lin * _pw(t, 1 - alpha) + cub * _pw(t, 3 - alpha)
        return d

    return y, dy, caputo


def _ex3(a1, a2, lam):
    y, dy, caputo = _sine_parts(lam)
    D1, D2 = caputo(a1), caputo(a2)

    @lru_cache(maxsize=None)
    def g(t):
        ye = y(t)
        return D2(t) + ye * ye - D1(t)

    bvp = FractionalBVP(
        a1, a2, lambda t, y_, w: g(t) - y_ * y_ + w, _robin_11(y, dy),
        f_y=lambda t, y_, w: -2.0 * y_, f_w=lambda t, y_, w: 1.0,
        f_yy=lambda t, y_, w: -2.0, f_ww=_zero3, f_wy=_zero3,
    )
    return ExampleProblem("ex3", bvp, y, dy, a1, a2, caputo_alpha1=D1, caputo_alpha2=D2)


def _robin_linear(a2, y, dy):
    # y(0) + y'(0)/(1 - alpha2) = gamma1, y(1) + y'(1) = gamma2
    b1 = 1.0 / (1.0 - a2)
    return RobinBC(1.0, b1, y(0.0) + b1 * dy(0.0), 1.0, 1.0, y(1.0) + dy(1.0))


def _linear_example(id, a2, y, dy, f, c, b, D2):
    bc = _robin_linear(a2, y, dy)
    lin = LinearFBVP(a2, f, c, b, bc)
    return ExampleProblem(id, lin.as_bvp(), y, dy, 1.0, a2, parameter="value",
                          linear=lin, caputo_alpha2=D2)


def _ex4(a1, a2, lam):
    def y(t):
        return _pw(t, a2) + _pw(t, 2 * a2 - 1) + 1 + 3 * t + 4 * t ** 3 + t ** 4

    def dy(t):
        return a2 * _pw(t, a2 - 1) + (2 * a2 - 1) * _pw(t, 2 * a2 - 2) + 3 + 12 * t ** 2 + 4 * t ** 3

    def D2(t):
        return (gamma(a2 + 1) / gamma(1) + gamma(2 * a2) / gamma(a2) * _pw(t, a2 - 1)
                + 4 * gamma(4) / gamma(4 - a2) * _pw(t, 3 - a2)
                + gamma(5) / gamma(5 - a2) * _pw(t, 4 - a2))

    @lru_cache(maxsize=None)
    def phi(t):
        return D2(t) + (2 * t + 6) * dy(t)

    return _linear_example("ex4", a2, y, dy, phi, lambda t: 0.0, lambda t: -(2 * t + 6), D2)


def _ex5(a1, a2, lam):
    y, dy, caputo = _sine_parts(lam)
    D2 = caputo(a2)

    @lru_cache(maxsize=None)
    def forcing(t):
        return D2(t) + math.cos(t) * y(t) + math.sin(t) * dy(t)

    return _linear_example("ex5", a2, y, dy, forcing, lambda t: -math.cos(t),
                           lambda t: -math.sin(t), D2)


_BUILDERS = {"ex1": _ex1, "ex2": _ex2, "ex3": _ex3, "ex4": _ex4, "ex5": _ex5}
