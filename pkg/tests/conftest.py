from __future__ import annotations

import pytest
from hypothesis import settings

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """``record("2 float", ok, detail)`` logs one acceptance line for the summary."""
    def _record(k, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE[str(k)] = (bool(ok), detail)
        print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE, key=lambda s: (int(s.split()[0]), s)):
        ok, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:<10} {'PASS' if ok else 'FAIL'}  {detail}")
