"""Command-line entry point: ``fracbvp solve | converge | check-eps``.

Exit codes: 0 success, 2 invalid arguments, 3 shooting diverged,
4 numeric failure in the IVP solver.

Every flag can also be given in a plain-text config file (``--config``)
as ``key = value`` lines, keys spelled like the flags with or without the
leading dashes. Flags on the command line win over the file.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .core import UniformGrid
from .harness import build_example, check_eps_reduction, emit_report, max_error, run_convergence, solve_example
from .hpcm import SolverError
from .problems import EXAMPLE_IDS
from .shooting import ShootingConfig

EXIT_OK, EXIT_USAGE, EXIT_DIVERGED, EXIT_NUMERIC = 0, 2, 3, 4

log = logging.getLogger("fracbvp")


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from err


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from err


def _shooting_flags(p: argparse.ArgumentParser):
    p.add_argument("--example", choices=EXAMPLE_IDS, required=True)
    p.add_argument("--alpha1", type=float, default=None, help="order of the inner derivative")
    p.add_argument("--alpha2", type=float, default=None, help="order of the leading derivative")
    p.add_argument("--method", choices=("newton", "halley"), default="newton")
    p.add_argument("--scheme", choices=("linear", "quadratic"), default="linear")
    p.add_argument("--solver", choices=("hpcm", "linear_explicit"), default="hpcm")
    p.add_argument("--s0", type=float, default=0.2, help="initial shooting guess")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10)
    p.add_argument("--eps", type=float, default=1e-10, help="regularisation for alpha1 = 1")
    p.add_argument("--out", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracbvp", description=__doc__.splitlines()[0])
    parser.add_argument("--config", type=Path, default=None, help="key = value defaults file")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="shoot one problem and write its nodal solution")
    _shooting_flags(p)
    p.add_argument("--n", type=int, required=True, help="number of subintervals")

    p = sub.add_parser("converge", help="error/rate table over a list of grid sizes")
    _shooting_flags(p)
    p.add_argument("--n-list", type=_int_list, default=[10, 20, 40, 80, 160, 320])
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")

    p = sub.add_parser("check-eps", help="full versus reduced system gap for alpha1 = 1")
    p.add_argument("--example", choices=("ex4", "ex5"), default="ex5")
    p.add_argument("--alpha2", type=float, default=None)
    p.add_argument("--eps-list", type=_float_list, default=[1e-1, 1e-2, 1e-3])
    p.add_argument("--n", type=int, default=80)
    p.add_argument("--s", type=float, default=None, help="shooting value (default: exact)")
    p.add_argument("--scheme", choices=("linear", "quadratic"), default="linear")
    p.add_argument("--out", type=Path, default=None)
    return parser


def read_config(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str], values: dict[str, str]):
    # find the subparser named on the command line and seed its defaults
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in sub_action.choices), None)
    if command is None:
        return
    sub = sub_action.choices[command]
    actions = {a.dest: a for a in sub._actions if a.dest != "help"}
    defaults = {}
    for key, raw in values.items():
        if key in ("config", "verbose"):
            continue
        if key not in actions:
            raise UsageError(f"unknown config key {key!r} for '{command}'")
        act = actions[key]
        try:
            val = act.type(raw) if act.type else raw
        except (ValueError, argparse.ArgumentTypeError) as err:
            raise UsageError(f"bad value for {key!r}: {err}") from err
        if act.choices is not None and val not in act.choices:
            raise UsageError(f"{key!r} must be one of {', '.join(map(str, act.choices))}")
        defaults[key] = val
        act.required = False
    sub.set_defaults(**defaults)


def _config_from(args) -> ShootingConfig:
    return ShootingConfig(s0=args.s0, max_iter=args.max_iter, tol=args.tol,
                          method=args.method, scheme=args.scheme)


def _example(args):
    return build_example(args.example, getattr(args, "alpha1", None), args.alpha2)


def _open_out(path: Path | None):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_solve(args) -> int:
    ex = _example(args)
    trace = solve_example(ex, args.n, _config_from(args), args.solver, args.eps)
    if trace.termination == "diverged" and trace.final_solution is None:
        print(f"shooting failed: {trace.message}", file=sys.stderr)
        return EXIT_NUMERIC if isinstance(trace.error, SolverError) else EXIT_DIVERGED
    sol = trace.final_solution
    print(f"example={ex.id} N={args.n} s={trace.s:.16g} residual={trace.best[2]:.3e} "
          f"k={trace.iterations} termination={trace.termination} "
          f"max_error={max_error(trace, ex):.3e}", file=sys.stderr)
    fh = _open_out(args.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("t", "y"))
        for t, y in zip(sol.grid.nodes, sol.values[0]):
            w.writerow((repr(float(t)), repr(float(y))))
    finally:
        if fh is not sys.stdout:
            fh.close()
    if trace.termination == "diverged":
        print(f"shooting diverged: {trace.message}", file=sys.stderr)
        return EXIT_NUMERIC if isinstance(trace.error, SolverError) else EXIT_DIVERGED
    return EXIT_OK


def cmd_converge(args) -> int:
    ex = _example(args)
    report = run_convergence(ex, N_list=args.n_list, config=_config_from(args),
                             solver=args.solver, eps=args.eps)
    text = emit_report(report, args.format)
    fh = _open_out(args.out)
    try:
        fh.write(text)
    finally:
        if fh is not sys.stdout:
            fh.close()
    statuses = [r.status for r in report.rows]
    if any(s.startswith("failed") for s in statuses):
        return EXIT_NUMERIC
    if "diverged" in statuses:
        return EXIT_DIVERGED
    return EXIT_OK


def cmd_check_eps(args) -> int:
    ex = build_example(args.example, None, args.alpha2)
    s = ex.exact_shooting_value if args.s is None else args.s
    rows = check_eps_reduction(ex.bvp, s, args.eps_list, UniformGrid(0.0, 1.0, args.n),
                               args.scheme, parameter=ex.parameter)
    fh = _open_out(args.out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("eps", "sup_difference"))
        for eps, d in rows:
            w.writerow((f"{eps:g}", f"{d:.3E}"))
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "converge": cmd_converge, "check-eps": cmd_check_eps}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    cfg_path = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            cfg_path = Path(argv[i + 1])
        elif a.startswith("--config="):
            cfg_path = Path(a.split("=", 1)[1])
    try:
        if cfg_path is not None:
            _apply_config(parser, argv, read_config(cfg_path))
    except (UsageError, OSError) as err:
        print(f"fracbvp: error: {err}", file=sys.stderr)
        return EXIT_USAGE

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ValueError, KeyError) as err:
        print(f"fracbvp: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as err:
        print(f"fracbvp: numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except ArithmeticError as err:
        print(f"fracbvp: diverged: {err}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
