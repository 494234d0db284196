import pytest

from room_memory.knowledge import load_kb

_criteria: dict[int, tuple[str, list[str]]] = {}


@pytest.fixture(scope="session")
def kb():
    return load_kb()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, text = marker.args
        failed = _criteria.setdefault(number, (text, []))[1]
        if not report.passed:
            failed.append(getattr(item, "callspec", None) and item.callspec.id or item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, (text, failed) in sorted(_criteria.items()):
        status = "FAIL" if failed else "PASS"
        detail = f" (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"[{status}] criterion {number}: {text}{detail}")
