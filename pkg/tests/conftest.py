import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "repdiff",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repdiff"))


import pytest  # noqa: E402

from repdiff.solver import ProveConfig, prove  # noqa: E402

_REPORTS = {}


def proof_report(sequence: str, paper_m_override: bool = False, precision: int = 200):
    key = (sequence, paper_m_override, precision)
    if key not in _REPORTS:
        _REPORTS[key] = prove(sequence, ProveConfig(precision=precision, paper_m_override=paper_m_override))
    return _REPORTS[key]


@pytest.fixture(scope="session")
def reports():
    return proof_report


ACCEPTANCE = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
