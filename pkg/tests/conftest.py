import time

import numpy as np
import pytest

_START = time.perf_counter()
_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "run_last: run after every other test")


def pytest_collection_modifyitems(items):
    items.sort(key=lambda item: item.get_closest_marker("run_last") is not None)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(_CRITERIA, key=lambda c: c[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {name}: {detail}")


@pytest.fixture
def record_criterion():
    def record(number, name, ok, detail):
        _CRITERIA.append((number, name, bool(ok), detail))

    return record


@pytest.fixture
def suite_elapsed():
    return lambda: time.perf_counter() - _START


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
