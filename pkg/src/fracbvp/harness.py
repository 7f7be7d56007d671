"""Convergence studies on the benchmark problems.

A sweep shoots once per grid size, measures the maximum nodal error
against the exact solution and the observed order
``log2(err(N) / err(2N))`` between consecutive rows.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .core import UniformGrid
from .hpcm import SolverError, solve_system
from .linear_explicit import shoot_linear
from .problems import EXAMPLE_IDS, ExampleProblem, build_example
from .shooting import ShootingConfig, ShootingTrace, shoot
from .transform import FractionalBVP, to_system_case2_full, to_system_case2_reduced

__all__ = [
    "CSV_HEADER",
    "ConvergenceReport",
    "ConvergenceRow",
    "EXAMPLE_IDS",
    "build_example",
    "check_eps_reduction",
    "emit_report",
    "max_error",
    "parse_csv",
    "run_convergence",
    "solve_example",
]

CSV_HEADER = ("N", "max_error", "rate", "k", "residual", "wall_time_s")

SOLVERS = ("hpcm", "linear_explicit")


@dataclass
class ConvergenceRow:
    N: int
    max_error: float
    rate: float | None
    k: int
    residual: float
    wall_time: float
    status: str = "converged"


@dataclass
class ConvergenceReport:
    """Rows of a sweep plus the settings that produced them."""

    rows: list[ConvergenceRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.max_error for r in self.rows])

    @property
    def rates(self) -> list[float | None]:
        return [r.rate for r in self.rows]

    @property
    def final_rate(self) -> float | None:
        return self.rows[-1].rate if self.rows else None


def max_error(trace: ShootingTrace, example: ExampleProblem) -> float:
    """``max_j |y_j - y(t_j)|`` over all nodes ``t_0 .. t_N`` of the best iterate.

    ``t_0`` is included: ``y_0`` is built from the shooting value and is
    only as accurate as ``s``.
    """
    sol = trace.final_solution
    t = sol.grid.nodes
    exact = np.array([example.exact_solution(tt) for tt in t])
    return float(np.max(np.abs(sol.values[0] - exact)))


def solve_example(example: ExampleProblem, N: int, config: ShootingConfig,
                  solver: str = "hpcm", eps: float = 1e-10) -> ShootingTrace:
    """Shoot one example on ``N`` uniform subintervals of ``[0, 1]``."""
    grid = UniformGrid(0.0, example.bvp.b, N)
    if solver == "linear_explicit":
        if example.linear is None:
            raise ValueError(f"{example.id} is not a linear problem")
        return shoot_linear(replace(example.linear, eps=eps), grid, config)
    if solver != "hpcm":
        raise ValueError(f"unknown solver {solver!r}; choose from {', '.join(SOLVERS)}")
    return shoot(example.bvp, grid, config, eps=eps, parameter=example.parameter)


def run_convergence(example: ExampleProblem, method: str | None = None, scheme: str | None = None,
                    N_list: Sequence[int] = (10, 20, 40, 80, 160, 320),
                    config: ShootingConfig | None = None, solver: str = "hpcm",
                    eps: float = 1e-10) -> ConvergenceReport:
    """Shoot ``example`` for every ``N`` in ``N_list`` and tabulate errors and rates.

    ``method`` and ``scheme`` override the corresponding ``config`` fields.
    A failed shoot is recorded with ``nan`` error and its termination
    status; the sweep carries on with the next ``N``.
    """
    Ns = [int(n) for n in N_list]
    if not Ns or any(n < 1 for n in Ns) or any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("N_list must be a non-empty strictly increasing list of positive integers")
    config = config or ShootingConfig()
    updates = {k: v for k, v in (("method", method), ("scheme", scheme)) if v is not None}
    config = replace(config, **updates)

    report = ConvergenceReport(metadata={
        "example": example.id, "method": config.method, "scheme": config.scheme,
        "solver": solver, "alpha1": example.alpha1, "alpha2": example.alpha2,
        "s0": config.s0, "tol": config.tol, "max_iter": config.max_iter,
    })
    prev = None
    for N in Ns:
        start = time.perf_counter()
        try:
            trace = solve_example(example, N, config, solver, eps)
        except (SolverError, ArithmeticError) as err:
            report.rows.append(ConvergenceRow(N, math.nan, None, 0, math.nan,
                                              time.perf_counter() - start, f"failed: {err}"))
            prev = None
            continue
        wall = time.perf_counter() - start
        if trace.final_solution is None:
            err, res = math.nan, math.nan
        else:
            err, res = max_error(trace, example), trace.best[2]
        rate = None
        if prev is not None and err > 0 and prev > 0 and math.isfinite(err):
            rate = math.log2(prev / err)
        report.rows.append(ConvergenceRow(N, err, rate, trace.iterations, res, wall, trace.termination))
        prev = err if math.isfinite(err) else None
    return report


def check_eps_reduction(problem: FractionalBVP, s: float, eps_list: Iterable[float],
                        grid: UniformGrid, scheme: str = "linear",
                        parameter: str = "slope") -> list[tuple[float, float]]:
    """Sup-norm gap in ``y`` between the full and reduced ``alpha1 = 1`` systems.

    For each ``eps`` both systems are solved with the same ``s`` and grid.
    """
    eps_list = [float(e) for e in eps_list]
    if any(not 0 < e < 1 for e in eps_list):
        raise ValueError("every eps must lie in (0, 1)")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    out = []
    for eps in eps_list:
        full = solve_system(to_system_case2_full(problem, s, eps, parameter), grid, scheme)
        reduced = solve_system(to_system_case2_reduced(problem, s, eps, parameter), grid, scheme)
        out.append((eps, float(np.max(np.abs(full.values[0] - reduced.values[0])))))
    return out


def _sci(x: float) -> str:
    return "nan" if not math.isfinite(x) else f"{x:.2E}"


def emit_report(report: ConvergenceReport, format: str = "csv") -> str:
    """Render a report as CSV (``N,max_error,rate,k,residual,wall_time_s``) or markdown."""
    if not report.rows:
        raise ValueError("empty report")
    cells = [(str(r.N), _sci(r.max_error), "" if r.rate is None else f"{r.rate:.3f}",
              str(r.k), _sci(r.residual), f"{r.wall_time:.3f}") for r in report.rows]
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(cells)
        return buf.getvalue()
    if format == "markdown":
        m = report.metadata
        scheme = m.get("scheme", "?") if m.get("solver", "hpcm") == "hpcm" else m["solver"]
        title = (f"{m.get('example', '?')}: {m.get('method', '?')} / {scheme}, "
                 f"alpha1 = {m.get('alpha1')}, alpha2 = {m.get('alpha2')}")
        lines = [f"**{title}**", "", "| N | Max. error | Rate | k | Residual | Time (s) |",
                 "|---:|---:|---:|---:|---:|---:|"]
        for c in cells:
            lines.append("| " + " | ".join(c[:2] + (c[2] or "-",) + c[3:]) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def parse_csv(text: str) -> list[dict]:
    """Inverse of :func:`emit_report` for the CSV format."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected header {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append({
            "N": int(rec["N"]),
            "max_error": float(rec["max_error"]),
            "rate": float(rec["rate"]) if rec["rate"] else None,
            "k": int(rec["k"]),
            "residual": float(rec["residual"]),
            "wall_time_s": float(rec["wall_time_s"]),
        })
    return rows
