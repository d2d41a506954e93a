from collections import defaultdict

import pytest

_OUTCOMES: dict[int, tuple[str, str]] = {}
_DETAILS: dict[int, list[str]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered end-to-end acceptance criterion")


@pytest.fixture
def report(request):
    """Append a line to the acceptance summary of the current criterion."""
    number = request.node.get_closest_marker("criterion").args[0]
    return lambda line: _DETAILS[number].append(str(line))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _OUTCOMES[number] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance details")
    for number in sorted(_OUTCOMES):
        tr.write_line(f"[{number}] {_OUTCOMES[number][1]}")
        for line in _DETAILS[number]:
            tr.write_line(f"    {line}")
    tr.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        status, title = _OUTCOMES[number]
        tr.write_line(f"CRITERION {number:>2} {status}: {title}")
