"""Collects one verdict line per acceptance criterion for the terminal summary."""

from __future__ import annotations

import pytest

_VERDICTS: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record ``(number, passed, text)`` for the summary and echo it."""

    def record(number: int, passed: bool, text: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {text}"
        _VERDICTS[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_VERDICTS):
            terminalreporter.write_line(_VERDICTS[number])
