import re

import pytest

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_configure(config):
    config.stash[_results_key] = {}


_results_key = pytest.StashKey[dict]()


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    results = _config.stash[_results_key]
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.failed:
        if report.failed or key not in results:
            results[key] = "PASS" if report.passed else "FAIL"


_config = None


@pytest.hookimpl(tryfirst=True)
def pytest_sessionstart(session):
    global _config
    _config = session.config


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_results_key]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), outcome in sorted(results.items()):
        terminalreporter.write_line(f"criterion {num:2d} {name.replace('_', ' ')}: {outcome}")
