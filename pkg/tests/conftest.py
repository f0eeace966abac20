import numpy as np
import pytest

from herding_mfg.game import GameSpec


def random_affine(seed: int, n: int) -> GameSpec:
    rng = np.random.default_rng(seed)
    return GameSpec(tuple(f"a{i}" for i in range(n)), rng.uniform(-1, 1, n), rng.uniform(-1, 1, (n, n)),
                    name=f"random{seed}")


def weights(eqs):
    return sorted(tuple(round(x, 9) for x in p.mu.weights) for p in eqs.points)


def same_points(eqs, expected, tol=1e-9):
    got = [p.mu.weights for p in eqs.points]
    if len(got) != len(expected):
        return False
    return all(any(max(abs(a - b) for a, b in zip(g, e)) <= tol for g in got) for e in expected)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
