import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from arrmono.arrgeo import builtin, intersection_lattice  # noqa: E402
from arrmono.pi1cover import arrangement_presentation  # noqa: E402

_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str = "") -> None:
        _CRITERIA[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


_CACHE: dict = {}


def catalog(name: str):
    """(arrangement, lattice) for a catalog name, built once per session."""
    if name not in _CACHE:
        arr = builtin(name)
        _CACHE[name] = (arr, intersection_lattice(arr))
    return _CACHE[name]


def presentation(name: str, infinity_line=None, skip: int = 0):
    key = ("pres", name, infinity_line, skip)
    if key not in _CACHE:
        arr, lat = catalog(name)
        _CACHE[key] = arrangement_presentation(arr, lat, infinity_line, skip=skip)
    return _CACHE[key]
