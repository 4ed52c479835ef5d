import pytest

_CRITERION_LINES = []


def record_criterion(name: str, ok: bool, detail: str) -> str:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    _CRITERION_LINES.append(line)
    print(line)
    return line


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion, then assert."""

    def check(name: str, ok: bool, detail: str):
        record_criterion(name, ok, detail)
        assert ok, f"{name}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _clean_out_dir_env(monkeypatch):
    monkeypatch.delenv("SCVAMP_OUT_DIR", raising=False)
