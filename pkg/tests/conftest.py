from __future__ import annotations

from collections import defaultdict

import pytest

CRITERIA = {
    1: "Weibull closed form over nine shapes to 1e-12, under 1 ms",
    2: "gamma(k, 1) at T=1 over nine shapes within 0.0015, under 1 s",
    3: "HPP and power-law NHPP Monte Carlo rows within 0.01, under 60 s",
    4: "GRP weibull(1,2) q=0.5 T=2 within 0.21 +/- 0.02",
    5: "renewal Monte Carlo vs renewal-equation oracle within 0.01, 0.82 flagged",
    6: "property suites (bounds, sign law, symmetry, invariance, oracle, determinism)",
    7: "Nelson-Aalen and MCF worked examples",
}

_node_criterion: dict[str, int] = {}
_outcomes: dict[int, list[tuple[str, bool]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test adjudicates")


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            _node_criterion[item.nodeid] = marker.args[0]


def pytest_runtest_logreport(report):
    n = _node_criterion.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or (report.failed and report.when == "setup"):
        _outcomes[n].append((report.nodeid.split("::")[-1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, text in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            tr.write_line(f"criterion {n}: NOT RUN  {text}")
            continue
        passed = sum(ok for _, ok in results)
        verdict = "PASS" if passed == len(results) else "FAIL"
        tr.write_line(f"criterion {n}: {verdict}  ({passed}/{len(results)} checks)  {text}")
        for name, ok in results:
            if not ok:
                tr.write_line(f"    failed: {name}")
