"""Acceptance bookkeeping: one PASS/FAIL line per criterion in the terminal summary."""

from __future__ import annotations

import pytest

CRITERIA = {
    1: "Kummer generic fiber table",
    2: "specialization a = -1",
    3: "NF ranks 19 / 20",
    4: "degeneration hypothesis checker",
    5: "Euler number conservation",
    6: "Zariski property suite",
    7: "boundary certificate",
    8: "Weil reciprocity",
    9: "local cycle winding",
    10: "invariant identities",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes.setdefault(n, []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        runs = _outcomes.get(n)
        status = "NOT RUN" if runs is None else ("PASS" if all(runs) else "FAIL")
        terminalreporter.write_line(f"criterion {n:2d}: {status:7s} (exact) {title}")
