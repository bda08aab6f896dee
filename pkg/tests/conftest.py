import re

from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_criteria: dict = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m or (report.when != "call" and report.passed):
        return
    n = int(m.group(1))
    if report.when == "call" or n not in _criteria:
        _criteria[n] = (m.group(2).replace("_", " "), report.passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        name, ok, secs = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {name}  ({secs:.1f}s)")
