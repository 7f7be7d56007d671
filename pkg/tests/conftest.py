"""One PASS/FAIL line per acceptance criterion in the terminal summary.

Tests carrying ``@pytest.mark.criterion(n)`` are grouped by ``n``. A
criterion passes only if every one of its checks passed; a strict
``xfail`` (a documented, unattainable check) counts as a failure of the
criterion while keeping the suite green.
"""

from collections import defaultdict

import pytest

TITLES = {
    1: "Example 1 errors and rates at N=320 (Newton/linear, Halley/quadratic)",
    2: "Example 1 shooting residual decay, h=0.01, Newton from s0=0.2",
    3: "Order sweep rates at N=2048 on Examples 1-3",
    4: "Example 4 low-regularity rates at N=2048 (explicit linear scheme)",
    5: "Example 5 rates by N=320 for alpha2 = 1.1 .. 1.9",
    6: "Property suite (weights, exactness, Mittag-Leffler, sensitivities, eps reduction, affinity)",
    7: "Example 1 errors independent of s0 in {0.2, 1.0}",
}

_checks = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): check belonging to acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        ok = rep.passed and not hasattr(rep, "wasxfail")
        detail = dict(item.user_properties).get("measured", "")
        _checks[marker.args[0]].append((item.name, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not _checks:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_checks):
        checks = _checks[n]
        passed = sum(ok for _, ok, _ in checks)
        status = "PASS" if passed == len(checks) else "FAIL"
        tr.write_line(f"CRITERION {n}: {status} - {TITLES.get(n, '')} ({passed}/{len(checks)} checks)")
        for name, ok, detail in checks:
            if not ok:
                tr.write_line(f"    failed check {name}: {detail}")
