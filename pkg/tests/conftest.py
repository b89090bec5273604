from __future__ import annotations

import functools

import pytest

from weyl1d.fixtures import get_fixture
from weyl1d.spectral import Discretization, eigen_solve

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def fixture_spectrum(name: str, elements: int = 4000):
    """Spectrum of a built-in fixture, shared across tests in one session."""
    space = get_fixture(name).build()
    return eigen_solve(space, Discretization.auto(space, elements), use_cache=False)


@pytest.fixture(autouse=True)
def _isolated_cache(monkeypatch, tmp_path_factory):
    # keep tests away from a user cache directory
    monkeypatch.setenv("WEYL1D_CACHE_DIR", str(tmp_path_factory.mktemp("cache")))


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the acceptance summary."""

    def _report(criterion: str, passed: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
