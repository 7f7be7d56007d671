"""Scalar building blocks shared by the solvers.

Gamma access, the two-parameter Mittag-Leffler series, uniform grids and
the small value types (orders, Robin boundary data) used everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "FractionalOrder",
    "MittagLefflerConvergenceError",
    "PoleError",
    "RobinBC",
    "UniformGrid",
    "gamma",
    "mittag_leffler",
]


class PoleError(ValueError):
    """Raised when the gamma function is evaluated at a pole."""


class MittagLefflerConvergenceError(RuntimeError):
    """Raised when the Mittag-Leffler series fails to converge in the term cap."""


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at x = {x:g}")
    return math.gamma(x)


def mittag_leffler(alpha, beta, t, *, rtol=1e-14, max_terms=10_000):
    r"""Two-parameter Mittag-Leffler function by direct power series.

    .. math:: E_{\alpha,\beta}(t) = \sum_{k\ge 0} \frac{t^k}{\Gamma(\alpha k + \beta)}

    Suitable for moderate arguments (``|t|`` of order one to a few units);
    no asymptotic branch is provided. ``t`` may be a real or complex scalar
    or array; the result has the matching shape and dtype kind.

    Parameters
    ----------
    alpha, beta : float
        Positive parameters.
    t : scalar or array_like
        Argument(s).
    rtol : float
        Summation stops once the terms are decreasing and the last two are
        below ``rtol`` times the accumulated sum.
    max_terms : int
        Term cap; exceeding it raises :class:`MittagLefflerConvergenceError`.
    """
    if not (alpha > 0 and beta > 0):
        raise ValueError("mittag_leffler requires alpha > 0 and beta > 0")

    t_arr = np.asarray(t)
    scalar = t_arr.ndim == 0
    dtype = np.complex128 if np.iscomplexobj(t_arr) else np.float64
    t_arr = np.atleast_1d(t_arr).astype(dtype)

    total = np.zeros_like(t_arr)
    power = np.ones_like(t_arr)
    prev_small = False
    prev_mag = np.full(t_arr.shape, np.inf)
    for k in range(max_terms):
        # 1/Gamma(alpha k + beta) through lgamma keeps large k finite
        coef = math.exp(-math.lgamma(alpha * k + beta))
        term = coef * power
        total = total + term
        mag = np.abs(term)
        small = bool(np.all(mag <= rtol * np.abs(total) + 1e-300))
        decreasing = bool(np.all(mag <= prev_mag))
        if small and prev_small and decreasing:
            break
        prev_small = small
        prev_mag = mag
        power = power * t_arr
    else:
        raise MittagLefflerConvergenceError(
            f"E_{{{alpha},{beta}}} series did not converge in {max_terms} terms"
        )

    if scalar:
        out = total[0]
        return complex(out) if dtype is np.complex128 else float(out)
    return total


@dataclass(frozen=True)
class FractionalOrder:
    """A positive fractional order.

    Use :meth:`unit` for orders in ``(0, 1]`` and :meth:`superunit` for
    orders in ``(1, 2)``; the plain constructor only enforces positivity.
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"fractional order must be positive, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def unit(cls, value: float) -> FractionalOrder:
        if not 0 < value <= 1:
            raise ValueError(f"unit-interval order must lie in (0, 1], got {value!r}")
        return cls(value)

    @classmethod
    def superunit(cls, value: float) -> FractionalOrder:
        if not 1 < value < 2:
            raise ValueError(f"superunit order must lie in (1, 2), got {value!r}")
        return cls(value)

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class UniformGrid:
    """Uniform partition ``a = t_0 < ... < t_N = b`` with step ``h``."""

    a: float
    b: float
    N: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"grid needs a < b, got a={self.a}, b={self.b}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"grid needs a positive integer N, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.N

    @cached_property
    def nodes(self) -> np.ndarray:
        t = self.a + self.h * np.arange(self.N + 1)
        t[-1] = self.b
        return t

    def node(self, j: int) -> float:
        return float(self.nodes[j])

    @property
    def half_node(self) -> float:
        """The midpoint ``t_{1/2}`` of the first panel."""
        return self.a + 0.5 * self.h


@dataclass(frozen=True)
class RobinBC:
    """Robin data ``a1 y(a) + b1 y'(a) = gamma1``, ``a2 y(b) + b2 y'(b) = gamma2``."""

    a1: float
    b1: float
    gamma1: float
    a2: float
    b2: float
    gamma2: float

    def __post_init__(self):
        if self.a1 == 0 and self.b1 == 0:
            raise ValueError("left Robin condition has a1 = b1 = 0")
        if self.a2 == 0 and self.b2 == 0:
            raise ValueError("right Robin condition has a2 = b2 = 0")

    def left(self, y0: float, dy0: float) -> float:
        """Left operator residual ``a1 y + b1 y' - gamma1``."""
        return self.a1 * y0 + self.b1 * dy0 - self.gamma1

    def right(self, yb: float, dyb: float) -> float:
        """Right operator residual ``a2 y + b2 y' - gamma2``."""
        return self.a2 * yb + self.b2 * dyb - self.gamma2
