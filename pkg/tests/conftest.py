import pytest

_criteria: dict[str, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    key = marker.args[0]
    title = marker.args[1] if len(marker.args) > 1 else ""
    entry = _criteria.setdefault(key, [title, True, ""])
    if report.failed:
        entry[1] = False
        entry[2] = str(report.longrepr.reprcrash.message if hasattr(report.longrepr, "reprcrash") else "")
    for name, value in report.user_properties:
        if name == "detail" and report.when == "call":
            entry[2] = entry[2] or value


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: int(k[1:])):
        title, ok, detail = _criteria[key]
        line = f"{key} {'PASS' if ok else 'FAIL'} {title}"
        if detail:
            line += f" [{detail.splitlines()[0]}]"
        terminalreporter.write_line(line)
