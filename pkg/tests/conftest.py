import pytest

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if report.passed:
            status = "PASS"
        elif report.skipped:
            status = "BLOCKED"
        else:
            status = "FAIL"
        details = [v for k, v in item.user_properties if k == "detail"]
        if report.skipped and isinstance(report.longrepr, tuple):
            details.append(report.longrepr[2])
        _criteria.append((marker.args[0], marker.args[1], status, "; ".join(details)))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, detail in sorted(_criteria, key=lambda c: (int(c[0]), c[1])):
        line = f"[{status:7}] {number:>2}. {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
