import math

import numpy as np
import pytest

from kgsr.model import PhysicalConfig

# Parameter set shared by the linear-coupling figures.
FIGURE_BASE = dict(M=1.0, e=1.0, PhiB=1.0, omega=1.0, lam=1.0, B0=1.0, Omega=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig1a_config():
    return PhysicalConfig(alpha=0.5, **FIGURE_BASE)


def random_config(rng, *, mode="linear", lam=None, alpha_min=0.2):
    return PhysicalConfig(
        M=rng.uniform(0.5, 2.0),
        e=rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0),
        omega=rng.uniform(0.2, 2.0),
        Omega=rng.uniform(-1.0, 1.0),
        B0=rng.uniform(-1.5, 1.5),
        alpha=rng.uniform(alpha_min, 1.0),
        PhiB=rng.uniform(-2 * math.pi, 2 * math.pi),
        lam=rng.uniform(-1.5, 1.5) if lam is None else lam,
        xi1=rng.uniform(0.3, 2.5),
        xi2=rng.uniform(-1.0, 1.0),
        mode=mode,
    )


# Lines recorded by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def report(criterion: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
