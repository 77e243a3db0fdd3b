import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_acceptance: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _acceptance.get(number)
        status = "PASS" if report.outcome == "passed" else "FAIL"
        if prev is not None and prev[1] == "FAIL":
            status = "FAIL"
        elapsed = report.duration + (prev[2] if prev else 0.0)
        _acceptance[number] = (title, status, elapsed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, status, elapsed = _acceptance[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}  ({elapsed:.2f}s)")
