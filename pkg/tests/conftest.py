import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def detail(request):
    """Record a one-line summary for the acceptance report."""
    lines = []
    request.node.user_properties.append(("detail", lines))
    return lines.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    lines = next((v for k, v in item.user_properties if k == "detail"), [])
    _RESULTS[number] = (title, report.passed, "; ".join(lines))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, passed, info = _RESULTS[number]
        status = "PASS" if passed else "FAIL"
        suffix = f" ({info})" if info else ""
        terminalreporter.write_line(f"criterion {number:>2} {status}: {title}{suffix}")
