import re

import pytest

_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def accept():
    """Record one acceptance criterion; the test still asserts on its own."""

    def record(cid: str, ok: bool, detail: str = "") -> bool:
        _RESULTS[cid] = (bool(ok), detail)
        return ok

    return record


def _order(cid):
    num, rest = re.match(r"(\d+)(.*)", cid).groups()
    return int(num), rest


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=_order):
        ok, detail = _RESULTS[cid]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {cid}: {detail}")
