"""Shooting solvers for two-point Caputo fractional boundary value problems.

``D^a2 y = f(t, y, D^a1 y)`` on ``[0, b]`` with Robin conditions at both
ends is recast as a system of fractional initial value problems in the
unknown initial slope (or value) ``s``, which Newton or Halley iteration
then adjusts until the right boundary condition holds. The initial value
systems are integrated with second or third order predictor-corrector
product integration.
"""

from .core import (
    FractionalOrder,
    MittagLefflerConvergenceError,
    PoleError,
    RobinBC,
    UniformGrid,
    gamma,
    mittag_leffler,
)
from .harness import (
    ConvergenceReport,
    ConvergenceRow,
    check_eps_reduction,
    emit_report,
    max_error,
    parse_csv,
    run_convergence,
    solve_example,
)
from .hpcm import Equation, FIVPSystem, SolutionGrid, SolverError, solve_system, starting_values
from .linear_explicit import SingularBracketError, forcing_integral, shoot_linear, solve_linear_explicit
from .problems import EXAMPLE_IDS, ExampleProblem, LinearFBVP, build_example, caputo_sine
from .shooting import (
    DivergenceError,
    ShootingConfig,
    ShootingTrace,
    boundary_value,
    halley_step,
    newton_step,
    residual,
    run_shooting,
    shoot,
)
from .transform import (
    FractionalBVP,
    MissingPartialError,
    halley_sensitivity_system,
    initial_state,
    newton_sensitivity_system,
    to_system,
    to_system_case1,
    to_system_case2_full,
    to_system_case2_reduced,
)
from .weights import (
    WeightTable,
    linear_corrector_weights,
    linear_predictor_weights,
    panel_moments,
    quadratic_corrector_weights,
    quadratic_predictor_weights,
    weight_table,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceReport", "ConvergenceRow", "DivergenceError", "EXAMPLE_IDS", "Equation",
    "ExampleProblem", "FIVPSystem", "FractionalBVP", "FractionalOrder", "LinearFBVP",
    "MissingPartialError", "MittagLefflerConvergenceError", "PoleError", "RobinBC",
    "ShootingConfig", "ShootingTrace", "SingularBracketError", "SolutionGrid", "SolverError",
    "UniformGrid", "WeightTable", "boundary_value", "build_example", "caputo_sine",
    "check_eps_reduction", "emit_report", "forcing_integral", "gamma", "halley_sensitivity_system",
    "halley_step", "initial_state", "linear_corrector_weights", "linear_predictor_weights",
    "max_error", "mittag_leffler", "newton_sensitivity_system", "newton_step", "panel_moments",
    "parse_csv", "quadratic_corrector_weights", "quadratic_predictor_weights", "residual",
    "run_convergence", "run_shooting", "shoot", "shoot_linear", "solve_example",
    "solve_linear_explicit", "solve_system", "starting_values", "to_system", "to_system_case1",
    "to_system_case2_full", "to_system_case2_reduced", "weight_table",
]
