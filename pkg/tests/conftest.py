"""Print one PASS/FAIL line per acceptance criterion after the run."""

from __future__ import annotations

_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.failed:
        prev = _CRITERIA.get(name, True)
        _CRITERIA[name] = prev and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        terminalreporter.write_line(f"{'PASS' if _CRITERIA[name] else 'FAIL'} {name[len('test_'):]}")
