"""Print the benchmark convergence tables as markdown.

Run: python3 demos/reproduce_tables.py [ex1|ex2|ex3|ex4|ex5 ...]

Examples 1-3 use alpha1 = 0.4, alpha2 = 1.7 and ten shooting updates from
s0 = 0.2. Example 4 uses the explicit linear scheme over several alpha2,
Example 5 both shooting methods over several alpha2.
"""

import sys

from fracbvp import ShootingConfig, build_example, emit_report, run_convergence

N_LIST = (10, 20, 40, 80, 160, 320)
FIXED_M = ShootingConfig(s0=0.2, max_iter=10, tol=1e-300)


def nonlinear(ex_id):
    ex = build_example(ex_id)
    for method, scheme in (("newton", "linear"), ("halley", "quadratic")):
        print(emit_report(run_convergence(ex, method, scheme, N_LIST, FIXED_M), "markdown"))


def example4():
    for alpha2 in (1.1, 1.5, 1.9):
        rep = run_convergence(build_example("ex4", alpha2=alpha2), "newton", N_list=(32, 64, 128, 256),
                              config=ShootingConfig(s0=0.2, tol=1e-6), solver="linear_explicit")
        print(emit_report(rep, "markdown"))


def example5():
    for alpha2 in (1.1, 1.5, 1.9):
        ex = build_example("ex5", alpha2=alpha2)
        for method, scheme in (("newton", "linear"), ("halley", "quadratic")):
            rep = run_convergence(ex, method, scheme, N_LIST, ShootingConfig(s0=0.2, tol=1e-5))
            print(emit_report(rep, "markdown"))


def main(argv):
    runners = {"ex1": lambda: nonlinear("ex1"), "ex2": lambda: nonlinear("ex2"),
               "ex3": lambda: nonlinear("ex3"), "ex4": example4, "ex5": example5}
    for name in argv or list(runners):
        runners[name]()


if __name__ == "__main__":
    main(sys.argv[1:])
