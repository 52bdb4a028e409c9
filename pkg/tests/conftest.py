import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("kg", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("kg")


@pytest.fixture
def fine_grid():
    from kgdecomp.grid import RadialGrid
    return RadialGrid.from_spacing(1e-3, 40.0, 1e-3)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion and return the verdict."""
    def record(number: int, title: str, passed: bool, detail: str) -> bool:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}: {detail}"
        _ACCEPTANCE.append((number, line))
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
