import numpy as np
import pytest

# criterion number -> list of (ok, detail); filled by test_acceptance
ACCEPTANCE = {}


def record_acceptance(number: int, ok: bool, detail: str):
    ACCEPTANCE.setdefault(number, []).append((bool(ok), detail))
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(p[0] for p in parts)
        detail = "; ".join(("" if p[0] else "[failed] ") + p[1] for p in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
