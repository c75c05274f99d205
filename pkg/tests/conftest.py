"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

_acceptance: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = (report.outcome, _acceptance.get(report.nodeid, ("", ""))[1])


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_acceptance.py::" in item.nodeid:
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _acceptance[item.nodeid] = ("not run", doc)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, title in _acceptance.values():
        mark = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"[{mark}] {title}")
