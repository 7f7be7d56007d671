"""Acceptance criteria 1-7.

Every test is tagged with its criterion number; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the run. Checks that cannot be
met are kept as strict ``xfail`` with the reason, so they still report
FAIL for their criterion (and would flip the suite red if they ever began
to pass unnoticed).
"""

import math

import numpy as np
import pytest

from fracbvp import (
    FIVPSystem,
    ShootingConfig,
    UniformGrid,
    build_example,
    check_eps_reduction,
    gamma,
    mittag_leffler,
    run_convergence,
    shoot,
    solve_linear_explicit,
    solve_system,
    weight_table,
)
from fracbvp.shooting import residual
from oracles import random_weight_tuples, sensitivity_discrepancy, weight_discrepancy

# a tolerance no residual can meet, so every run makes exactly m = 10 updates
FIXED_M = ShootingConfig(s0=0.2, max_iter=10, tol=1e-300)
TABLE_N = (10, 20, 40, 80, 160, 320)


def _measured(record_property, text):
    record_property("measured", text)
    print(text)


# ---------------------------------------------------------------- criterion 1

@pytest.mark.criterion(1)
@pytest.mark.parametrize("method,scheme,err_ref,rate_ref", [
    ("newton", "linear", 3.30e-5, 1.966),
    ("halley", "quadratic", 9.88e-8, 2.925),
])
def test_c1_example1_convergence(record_property, method, scheme, err_ref, rate_ref):
    rep = run_convergence(build_example("ex1"), method, scheme, N_list=TABLE_N, config=FIXED_M)
    last = rep.rows[-1]
    wall = sum(r.wall_time for r in rep.rows)
    _measured(record_property, f"N=320 error {last.max_error:.3E} (ref {err_ref:.2E}), "
                               f"rate {last.rate:.3f} (ref {rate_ref}), sweep {wall:.1f}s")
    assert last.max_error == pytest.approx(err_ref, rel=0.25)
    assert last.rate == pytest.approx(rate_ref, abs=0.10)
    assert wall <= 60.0


# ---------------------------------------------------------------- criterion 2

@pytest.fixture(scope="module")
def c2_trace():
    ex = build_example("ex1")
    return shoot(ex.bvp, UniformGrid(0.0, 1.0, 100), ShootingConfig(s0=0.2, max_iter=10, tol=1e-300))


# table row m holds |F(s_{m-1})|, i.e. trace index m - 1
C2_REFERENCE = [
    (1, 0.604, None),
    (2, 4.22e-2, None),
    (3, 2.74e-4, None),
    (4, 7.3e-8, "The reference iteration contracts more slowly than exact Newton on the discrete "
                "residual (its k=3 to k=4 ratio is 2.7e-4). Our F_s matches finite differences of "
                "F to ~1e-6, so quadratic convergence gives 1.39e-8, a factor 5.3 below 7.3e-8."),
]


@pytest.mark.criterion(2)
@pytest.mark.parametrize("row,ref,why", [
    pytest.param(m, ref, why, marks=pytest.mark.xfail(strict=True, reason=why) if why else (), id=f"k{m}")
    for m, ref, why in C2_REFERENCE
])
def test_c2_residual_decay(record_property, c2_trace, row, ref, why):
    got = c2_trace.residuals[row - 1]
    _measured(record_property, f"k={row}: |F| {got:.3e} vs {ref:.3e} (ratio {got / ref:.2f})")
    assert ref / 3 <= got <= 3 * ref


@pytest.mark.criterion(2)
def test_c2_residual_reaches_floor(record_property, c2_trace):
    got = min(c2_trace.residuals[:6])
    _measured(record_property, f"min |F| over k=1..6: {got:.3e}")
    assert got <= 1e-12


# ---------------------------------------------------------------- criterion 3

PAIRS = [(0.9, 1.1), (0.7, 1.3), (0.5, 1.5), (0.3, 1.7), (0.1, 1.9)]
# tolerances of the reference sweeps, except Example 1 Newton (1e-5 there)
C3_TOL = {("ex1", "newton"): 1e-12, ("ex1", "halley"): 1e-10, ("ex2", "newton"): 1e-10,
          ("ex2", "halley"): 1e-10, ("ex3", "newton"): 1e-15, ("ex3", "halley"): 1e-16}
C3_BAND = {"newton": (1.85, 2.35), "halley": (2.75, 3.30)}
C3_RED = {
    ("ex3", 0.9, 1.1, "newton"): (
        "From s0 = 0.2 the residual is near its maximum (F(0.2) = 1.29, F(0.3) = 1.34), so the "
        "first Newton step lands at s = -0.79 where the IVP blows up; no rate exists. From "
        "s0 = 0 the same sweep gives 1.07E-08 and rate 2.246."),
}


def _c3_cases():
    for ex in ("ex1", "ex2", "ex3"):
        for a1, a2 in PAIRS:
            for method in ("newton", "halley"):
                why = C3_RED.get((ex, a1, a2, method))
                marks = (pytest.mark.xfail(strict=True, reason=why),) if why else ()
                yield pytest.param(ex, a1, a2, method, marks=marks, id=f"{ex}-{a1}-{a2}-{method}")


@pytest.mark.slow
@pytest.mark.criterion(3)
@pytest.mark.parametrize("ex,a1,a2,method", list(_c3_cases()))
def test_c3_order_sweep(record_property, ex, a1, a2, method):
    scheme = "linear" if method == "newton" else "quadratic"
    config = ShootingConfig(s0=0.2, max_iter=10, tol=C3_TOL[ex, method])
    rep = run_convergence(build_example(ex, a1, a2), method, scheme, N_list=(1024, 2048), config=config)
    last = rep.rows[-1]
    lo, hi = C3_BAND[method]
    rate = "n/a" if last.rate is None else f"{last.rate:.3f}"
    _measured(record_property, f"N=2048 error {last.max_error:.3E}, rate {rate}, k={last.k}, {last.status}")
    assert last.status == "converged"
    assert last.rate is not None and lo <= last.rate <= hi


@pytest.mark.slow
def test_c3_example3_newton_from_zero():
    # companion to the red entry above: the divergence is a basin effect of s0
    config = ShootingConfig(s0=0.0, max_iter=10, tol=1e-15)
    rep = run_convergence(build_example("ex3", 0.9, 1.1), "newton", "linear", N_list=(1024, 2048), config=config)
    assert rep.rows[-1].status == "converged"
    assert rep.rows[-1].max_error == pytest.approx(1.07e-8, rel=0.02)
    assert 1.85 <= rep.rows[-1].rate <= 2.35


# ---------------------------------------------------------------- criterion 4

@pytest.mark.slow
@pytest.mark.criterion(4)
@pytest.mark.parametrize("alpha2,lo,hi", [(1.7, 1.90, 2.10), (1.1, 1.05, 1.30)])
def test_c4_example4_rates(record_property, alpha2, lo, hi):
    rep = run_convergence(build_example("ex4", alpha2=alpha2), "newton", N_list=(1024, 2048),
                          config=ShootingConfig(s0=0.2, tol=1e-6), solver="linear_explicit")
    last = rep.rows[-1]
    _measured(record_property, f"alpha2={alpha2}: N=2048 error {last.max_error:.3E}, rate {last.rate:.3f}")
    assert lo <= last.rate <= hi


# ---------------------------------------------------------------- criterion 5

C5_RED = {
    ("halley", 1.1): "Our errors equal the reference table digit for digit; its own N=320 rate "
                     "is 3.244, still approaching 3 from above (3.233 at N=640).",
    ("halley", 1.3): "Matches the reference table (rate 3.179 at N=320, 3.118 at N=640); "
                     "pre-asymptotic, outside 3.0 +/- 0.10 at N=320.",
    ("newton", 1.1): "Matches the reference table (rate 2.232 at N=320, 2.221 at N=640); "
                     "pre-asymptotic, outside 2.0 +/- 0.15 at N=320.",
}


def _c5_cases():
    for method in ("halley", "newton"):
        for a2 in (1.1, 1.3, 1.5, 1.7, 1.9):
            why = C5_RED.get((method, a2))
            marks = (pytest.mark.xfail(strict=True, reason=why),) if why else ()
            yield pytest.param(method, a2, marks=marks, id=f"{method}-{a2}")


@pytest.mark.criterion(5)
@pytest.mark.parametrize("method,alpha2", list(_c5_cases()))
def test_c5_example5_rates(record_property, method, alpha2):
    scheme, target, band = ("quadratic", 3.0, 0.10) if method == "halley" else ("linear", 2.0, 0.15)
    rep = run_convergence(build_example("ex5", alpha2=alpha2), method, scheme, N_list=TABLE_N,
                          config=ShootingConfig(s0=0.2, tol=1e-5))
    last = rep.rows[-1]
    _measured(record_property, f"alpha2={alpha2}: N=320 error {last.max_error:.3E}, rate {last.rate:.3f}")
    assert last.rate == pytest.approx(target, abs=band)


# ---------------------------------------------------------------- criterion 6

@pytest.mark.criterion(6)
def test_c6_weights_against_quadrature(record_property):
    worst = max(weight_discrepancy(*tup) for tup in random_weight_tuples(200))
    _measured(record_property, f"max |weight - quadrature| / h^alpha over 200 tuples: {worst:.2e}")
    assert worst <= 1e-12


@pytest.mark.criterion(6)
@pytest.mark.parametrize("scheme,forcing,degree", [
    ("linear", lambda t: 2.0, 0), ("linear", lambda t: 1.0 + 3.0 * t, 1),
    ("quadratic", lambda t: 2.0, 0), ("quadratic", lambda t: 1.0 - t + 3.0 * t * t, 2),
])
def test_c6_corrector_exactness(record_property, scheme, forcing, degree):
    beta = 0.45
    grid = UniformGrid(0.0, 1.0, 20)
    sol = solve_system(FIVPSystem((beta,), (0.5,), lambda t, x: (forcing(t),)), grid, scheme)
    t = grid.nodes
    # J^beta of the polynomial, term by term
    coeffs = np.polynomial.polynomial.polyfit(t, [forcing(x) for x in t], degree)
    exact = 0.5 + sum(c * gamma(k + 1) / gamma(k + 1 + beta) * t ** (k + beta) for k, c in enumerate(coeffs))
    # the quadratic scheme takes t_1, t_2 from its second-order starting run
    first = 3 if scheme == "quadratic" and degree == 2 else 0
    err = np.max(np.abs(sol.values[0, first:] - exact[first:]))
    _measured(record_property, f"{scheme} scheme, degree {degree}: max error {err:.2e}")
    assert err <= 1e-13


@pytest.mark.criterion(6)
def test_c6_mittag_leffler_identities(record_property):
    z = np.linspace(-3, 3, 61)
    e1 = np.max(np.abs(mittag_leffler(1, 1, z) - np.exp(z)) / np.exp(np.abs(z)))
    e2 = np.max(np.abs(mittag_leffler(2, 1, -z * z) - np.cos(z)))
    nz = z[z != 0]
    e3 = np.max(np.abs(mittag_leffler(1, 2, nz) - np.expm1(nz) / nz))
    e4 = abs(mittag_leffler(0.5, 1, 0.7) - math.exp(0.49) * math.erfc(-0.7))
    _measured(record_property, f"identity errors {e1:.1e} {e2:.1e} {e3:.1e} {e4:.1e}")
    assert max(e1, e2, e3, e4) <= 1e-13


@pytest.mark.criterion(6)
def test_c6_classical_limit_weights(record_property):
    grid = UniformGrid(0.0, 1.0, 16)
    h = grid.h
    w = weight_table(1.0, grid)
    got = np.concatenate([w.B1[:16], w.B2[:16], w.b, w.a, w.A1[:15], w.A2[:15], w.A3[:15], w.A0[:, 0]])
    ref = np.concatenate([np.full(32, h / 2), [-h / 2, 3 * h / 2], np.array([5, -16, 23]) * h / 12,
                          np.full(15, -h / 12), np.full(15, 8 * h / 12), np.full(15, 5 * h / 12),
                          [h / 6, 4 * h / 6, h / 6]])
    err = np.max(np.abs(got - ref)) / h
    _measured(record_property, f"alpha=1 weights vs trapezoid/Adams/Simpson: {err:.1e}")
    assert err <= 1e-12


@pytest.fixture(scope="module")
def c6_sensitivity():
    ex = build_example("ex1")
    return {N: sensitivity_discrepancy(ex, 0.3, N, "linear") for N in (40, 80, 160)}


@pytest.mark.criterion(6)
@pytest.mark.parametrize("order", [1, 2], ids=["newton-vs-central", "halley-vs-second"])
def test_c6_sensitivity_vs_finite_differences(record_property, c6_sensitivity, order):
    # the gap is the discretisation error of the frozen-coefficient system;
    # it shrinks like h^alpha2 here because z ~ t^(alpha2 - 1) is not smooth
    gaps = [c6_sensitivity[N][order - 1] for N in (40, 80, 160)]
    rates = [math.log2(a / b) for a, b in zip(gaps, gaps[1:])]
    _measured(record_property, f"relative gaps {gaps[0]:.2e} {gaps[1]:.2e} {gaps[2]:.2e}, "
                               f"rates {rates[0]:.2f} {rates[1]:.2f}")
    assert gaps[-1] <= (1e-4 if order == 1 else 1e-3)
    assert min(rates) >= 1.7 - 0.15


@pytest.mark.criterion(6)
@pytest.mark.parametrize("s", [0.0, 1.0])
def test_c6_eps_reduction_monotone(record_property, s):
    ex = build_example("ex5")
    gaps = [g for _, g in check_eps_reduction(ex.bvp, s, [1e-1, 1e-2, 1e-3], UniformGrid(0.0, 1.0, 80),
                                              parameter="value")]
    _measured(record_property, "gaps " + " ".join(f"{g:.2e}" for g in gaps))
    assert gaps[0] > gaps[1] > gaps[2]


@pytest.mark.criterion(6)
@pytest.mark.parametrize("ex_id", ["ex4", "ex5"])
def test_c6_affine_residual(record_property, ex_id):
    ex = build_example(ex_id, alpha2=1.6)
    grid = UniformGrid(0.0, 1.0, 40)
    s = np.linspace(-3.0, 3.0, 7)
    F = np.array([residual(solve_linear_explicit(ex.linear, grid, x), ex.linear.bc) for x in s])
    fit = np.polyval(np.polyfit(s, F, 1), s)
    dev = np.max(np.abs(F - fit)) / np.max(np.abs(F))
    _measured(record_property, f"relative deviation from a line: {dev:.1e}")
    assert dev <= 1e-12


# ---------------------------------------------------------------- criterion 7

@pytest.mark.criterion(7)
@pytest.mark.parametrize("method,scheme", [("newton", "linear"), ("halley", "quadratic")])
def test_c7_guess_independence(record_property, method, scheme):
    ex = build_example("ex1")
    errs = [run_convergence(ex, method, scheme, N_list=TABLE_N,
                            config=ShootingConfig(s0=s0, max_iter=10, tol=1e-300)).errors
            for s0 in (0.2, 1.0)]
    diff = float(np.max(np.abs(errs[0] - errs[1])))
    _measured(record_property, f"max error difference between s0=0.2 and s0=1.0: {diff:.1e}")
    assert diff <= 1e-12
