"""Solve a user-defined nonlinear fractional BVP by Halley shooting.

    D^1.6 y = -y^3 + D^0.5 y + g(t),   y(0) - y'(0) = 0,   2 y(1) + y'(1) = 1

where ``g(t) = cos(3t)``. There is no closed form; the demo reports the
shooting value, the boundary residual and how much the solution (on a
common set of nodes) moves as the grid is refined.

Run: python3 demos/custom_problem.py
"""

import math

import numpy as np

from fracbvp import FractionalBVP, RobinBC, ShootingConfig, UniformGrid, shoot


def main():
    bvp = FractionalBVP(
        alpha1=0.5, alpha2=1.6,
        f=lambda t, y, w: -y ** 3 + w + math.cos(3 * t),
        bc=RobinBC(1.0, -1.0, 0.0, 2.0, 1.0, 1.0),
        f_y=lambda t, y, w: -3 * y * y, f_w=lambda t, y, w: 1.0,
        f_yy=lambda t, y, w: -6 * y, f_ww=lambda t, y, w: 0.0, f_wy=lambda t, y, w: 0.0,
    )
    config = ShootingConfig(s0=0.0, method="halley", scheme="quadratic", tol=1e-12)
    finals = {}
    for N in (40, 80, 160, 320):
        trace = shoot(bvp, UniformGrid(0.0, 1.0, N), config)
        sol = trace.final_solution
        finals[N] = sol.values[0, ::N // 40]
        print(f"N={N:4d}  s={trace.s:.12f}  |F|={trace.best[2]:.1e}  k={trace.iterations}  "
              f"y(1)={sol.final[0]:.12f}")
    for N in (40, 80, 160):
        print(f"max change N={N} -> {2 * N}: {np.max(np.abs(finals[2 * N] - finals[N])):.2e}")


if __name__ == "__main__":
    main()
