from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from minent.complex import MetricComplex  # noqa: E402
from minent.zoo import ZooSpec, build  # noqa: E402


@pytest.fixture(scope="session")
def figure_eight() -> MetricComplex:
    return build(ZooSpec("wedge_circles", {"k": 2})).metric()


@pytest.fixture(scope="session")
def torus() -> MetricComplex:
    return build(ZooSpec("torus", {"n": 3})).metric()


@pytest.fixture(scope="session")
def product():
    return build(ZooSpec("product_with_circle", {"c": 3}))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Print and keep one PASS/FAIL line per acceptance criterion."""
    def emit(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
