"""Per-criterion pass/fail report for the acceptance suite."""

import pytest

_RESULTS = {}
_TITLES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark:
            num, title = mark.args
            _TITLES[num] = title
            item.user_properties.append(("criterion", num))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark and (report.when == "call" or report.failed):
        num = mark.args[0]
        ok = report.passed if report.when == "call" else False
        _RESULTS[num] = _RESULTS.get(num, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        verdict = "PASS" if _RESULTS[num] else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {verdict}  {_TITLES[num]}")
