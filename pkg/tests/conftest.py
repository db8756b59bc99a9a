import pytest

_LINES = {}


@pytest.fixture
def record():
    """record(label, passed, detail) stores the acceptance line for the summary."""

    def _record(label, passed, detail=""):
        _LINES[label] = (bool(passed), detail)
        print(f"{label}: {'PASS' if passed else 'FAIL'} {detail}")
        return bool(passed)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_LINES):
        ok, detail = _LINES[label]
        terminalreporter.write_line(f"{label}: {'PASS' if ok else 'FAIL'}  {detail}")
