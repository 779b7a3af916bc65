import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""
    label = request.node.get_closest_marker("criterion").args[0]
    outcome = {"ok": False, "detail": ""}
    yield outcome
    status = "PASS" if outcome["ok"] else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] {label}: {outcome['detail']}")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
