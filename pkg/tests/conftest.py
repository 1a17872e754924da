from pathlib import Path

import pytest

from regexmend.evaluation import ExampleSet

FIXTURES = Path(__file__).parent / "fixtures"

# (criterion, passed, detail) lines written by test_acceptance.py
ACCEPTANCE: list = []


@pytest.fixture
def vowel_digits():
    return ExampleSet.load(FIXTURES / "vowel_digits.json")


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def verdict():
    def record(criterion: int, passed: bool, detail: str) -> None:
        line = f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
