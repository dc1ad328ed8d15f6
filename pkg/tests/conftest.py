from __future__ import annotations

import re

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        prev = _ACCEPTANCE.get(report.nodeid)
        if prev != "FAIL":
            _ACCEPTANCE[report.nodeid] = "FAIL" if report.failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, status in _ACCEPTANCE.items():
        name = nodeid.split("::")[-1]
        m = re.match(r"test_criterion_(\d+)_(.*)", name)
        label = f"criterion {m.group(1):>2}: {m.group(2).replace('_', ' ')}" if m else name
        terminalreporter.write_line(f"{status}  {label}")
