import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=100)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion id -> (passed, detail), filled by tests/test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record_criterion():
    def record(key: str, passed: bool, detail: str = ""):
        prev = ACCEPTANCE.get(key)
        if prev is not None:
            passed = passed and prev[0]
            detail = "; ".join(d for d in (prev[1], detail) if d)
        ACCEPTANCE[key] = (passed, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k), k)):
        passed, detail = ACCEPTANCE[key]
        line = f"{'PASS' if passed else 'FAIL'} criterion {key}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)
