import numpy as np
import pytest

from hurstqv import SamplePath, UniformGrid

ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def bilinear_covariance(j, k, n, T, H, order):
    """Brute-force E[D_j B D_k B] by expanding both increments over fBm values."""
    t = np.arange(n + 1) * T / n
    cov = lambda s, u: 0.5 * (s ** (2 * H) + u ** (2 * H) - abs(u - s) ** (2 * H))  # noqa: E731
    if order == 1:
        cj, ck = {j: 1.0, j - 1: -1.0}, {k: 1.0, k - 1: -1.0}
    else:
        cj, ck = {j + 1: 1.0, j: -2.0, j - 1: 1.0}, {k + 1: 1.0, k: -2.0, k - 1: 1.0}
    return sum(a * b * cov(t[p], t[q]) for p, a in cj.items() for q, b in ck.items())


@pytest.fixture
def make_path():
    def make(values, horizon=1.0):
        values = np.asarray(values, dtype=float)
        return SamplePath(UniformGrid(len(values) - 1, horizon), values)

    return make
