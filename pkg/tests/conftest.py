import time

import pytest
from hypothesis import settings

SESSION_START = time.perf_counter()

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_criteria: dict[str, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): acceptance criterion reported in the summary")
    config.addinivalue_line("markers", "run_last: run after every other test")


def pytest_collection_modifyitems(config, items):
    items.sort(key=lambda item: item.get_closest_marker("run_last") is not None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (rep.when == "call" or rep.failed):
        return
    label, text = marker.args
    status = "PASS" if rep.passed else "FAIL"
    if _criteria.get(label, ("PASS",))[0] == "FAIL":
        status = "FAIL"
    _criteria[label] = (status, text, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.lstrip("AC"))):
        status, text, duration = _criteria[label]
        terminalreporter.write_line(f"{label} {status} ({duration:.2f}s): {text}")
