import pytest

_criteria = {}


@pytest.fixture
def criterion():
    """record(n, ok, detail): one pass/fail line per acceptance criterion, printed at the end."""
    def record(n, ok, detail=""):
        _criteria[n] = (bool(ok), detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok, detail = _criteria[n]
        terminalreporter.write_line("criterion %2d: %s  %s" % (n, "PASS" if ok else "FAIL", detail))
