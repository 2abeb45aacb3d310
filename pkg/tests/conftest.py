import re

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.failed:
        _results[key] = "PASS" if report.passed and _results.get(key, "PASS") == "PASS" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), outcome in sorted(_results.items()):
        terminalreporter.write_line(f"criterion {num}: {outcome}  {name.replace('_', ' ')}")
