import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Return ``report(name, ok, detail)``: prints one pass/fail line for an
    acceptance criterion, keeps it for the end-of-run summary and asserts."""
    def report(name: str, ok: bool, detail: str = "") -> None:
        line = f"{name} {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        print(line)
        _ACCEPTANCE.append(line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
