import json
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
_AC_LINES = []


def record_ac(name: str, passed: bool, detail: str, seconds: float) -> str:
    line = f"{name:6s} {'PASS' if passed else 'FAIL'}  {detail}  [{seconds:.1f}s]"
    _AC_LINES.append(line)
    print(line)
    return line


@pytest.fixture(scope="session")
def frozen_oracle():
    return json.loads((DATA / "oracle_frozen.json").read_text())


def pytest_terminal_summary(terminalreporter):
    if _AC_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_AC_LINES, key=lambda s: int(s.split()[0].split("-")[1])):
            terminalreporter.write_line(line)
