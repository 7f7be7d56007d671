"""Which sign of the left Robin coefficient reproduces the Example 5 reference errors?

The left condition of Examples 4 and 5 can be read as
``y(0) + y'(0)/(1 - alpha2) = gamma1`` (coefficient negative for
alpha2 > 1, the package default) or with the opposite sign. Both variants
are solved with Newton/linear and Halley/quadratic shooting; the maximum
errors are printed next to the published reference values.

Run: python3 demos/bc_sign_convention.py
"""

from dataclasses import replace

from fracbvp import ExampleProblem, RobinBC, ShootingConfig, build_example, run_convergence

N_LIST = (10, 20, 40, 80, 160, 320)

# published maximum errors for alpha2 = 1.5
REFERENCE = {
    "newton": (9.45e-4, 1.97e-4, 4.38e-5, 1.03e-5, 2.49e-6, 6.12e-7),
    "halley": (1.08e-4, 1.06e-5, 1.15e-6, 1.33e-7, 1.60e-8, 1.96e-9),
}


def with_left_coefficient(ex: ExampleProblem, b1: float) -> ExampleProblem:
    y, dy = ex.exact_solution, ex.exact_derivative
    bc = RobinBC(1.0, b1, y(0.0) + b1 * dy(0.0), 1.0, 1.0, y(1.0) + dy(1.0))
    linear = replace(ex.linear, bc=bc)
    return replace(ex, bvp=linear.as_bvp(), linear=linear)


def main():
    alpha2 = 1.5
    base = build_example("ex5", alpha2=alpha2)
    variants = {
        "+1/(1-a2)": with_left_coefficient(base, 1.0 / (1.0 - alpha2)),
        "-1/(1-a2)": with_left_coefficient(base, -1.0 / (1.0 - alpha2)),
    }
    config = ShootingConfig(s0=0.2, tol=1e-5)
    for method, scheme in (("newton", "linear"), ("halley", "quadratic")):
        print(f"\n{method} / {scheme}, alpha2 = {alpha2}")
        print(f"{'N':>5} {'reference':>10} " + " ".join(f"{k:>10}" for k in variants))
        reports = {k: run_convergence(ex, method, scheme, N_LIST, config) for k, ex in variants.items()}
        for i, N in enumerate(N_LIST):
            cells = " ".join(f"{reports[k].rows[i].max_error:10.2E}" for k in variants)
            print(f"{N:>5} {REFERENCE[method][i]:10.2E} {cells}")


if __name__ == "__main__":
    main()
