from __future__ import annotations

import pytest

from akh import parse_morse_word
from akh.corpus import generate_corpus

FIG7 = "strands 3\nx+ 2\nx- 1\n"


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus()


@pytest.fixture(scope="session")
def fig7():
    return parse_morse_word(FIG7, name="fig7")


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    def put(number: int, ok: bool, text: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}"
        _ACCEPTANCE[number] = line
        print(line)
    return put


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
