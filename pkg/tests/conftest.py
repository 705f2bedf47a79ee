import os

import pytest

_acceptance = {}


def pytest_collection_modifyitems(config, items):
    if os.environ.get("MTT_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="slow; set MTT_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    crit = item.get_closest_marker("criterion")
    if crit is None:
        return
    key = (crit.args[0], crit.args[1])
    if rep.when == "call" or rep.outcome != "passed":
        _acceptance.setdefault(key, []).append(rep.outcome)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), outcomes in sorted(_acceptance.items()):
        if "failed" in outcomes:
            state = "FAIL"
        elif "passed" in outcomes:
            state = "PASS"
        else:
            state = "SKIP"
        terminalreporter.write_line(f"criterion {num}: {state}  {title}")
