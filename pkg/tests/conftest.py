from __future__ import annotations

from functools import lru_cache

from matgeom.graph import build_index
from matgeom.spaces import enumerate_space


@lru_cache(maxsize=None)
def space_of(desc: str):
    return enumerate_space(desc)


@lru_cache(maxsize=None)
def index_of(desc: str):
    return build_index(space_of(desc))


# criterion number -> "PASS ..." / "FAIL ..." line, filled by test_acceptance
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
