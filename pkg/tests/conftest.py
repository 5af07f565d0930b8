from __future__ import annotations

import pytest

from elabrep.modcore import GroupSpec
from elabrep.verify.expr import Context


@pytest.fixture(scope="session")
def g4() -> GroupSpec:
    return GroupSpec.make(2, 2)


@pytest.fixture(scope="session")
def g8() -> GroupSpec:
    return GroupSpec.make(2, 3)


@pytest.fixture(scope="session")
def g9() -> GroupSpec:
    return GroupSpec.make(3, 2)


@pytest.fixture(scope="session")
def ctx4() -> Context:
    return Context(2, 2)


@pytest.fixture(scope="session")
def ctx9() -> Context:
    return Context(3, 2)


# -- acceptance summary lines

_ACCEPTANCE: list[tuple[int, str, str, str]] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, what: str, ok: bool, detail: str = "", known_false: bool = False) -> None:
        status = "PASS" if ok else ("FAIL (false as printed, xfail strict)" if known_false else "FAIL")
        _ACCEPTANCE.append((number, status, what, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, what, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {number:2d}: {status}: {what} | {detail}")
