import numpy as np
import pytest

GRID = [(2, 1), (3, 2), (5, 2), (5, 3), (7, 3), (7, 4), (7, 5), (11, 7), (12, 5), (13, 8)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_complex(rng, n, lo=0.1, hi=10.0):
    mod = np.exp(rng.uniform(np.log(lo), np.log(hi), n))
    return mod * np.exp(2j * np.pi * rng.random(n))


def random_unit(rng, n):
    return np.exp(2j * np.pi * rng.random(n))


def random_chart_points(rng, chart, n):
    from s1resolve.chartcore import SlotKind

    cols = []
    for kind in chart.slots:
        if kind is SlotKind.CIRCLE:
            cols.append(random_unit(rng, n))
        elif kind is SlotKind.DISK:
            cols.append(np.sqrt(rng.random(n)) * random_unit(rng, n))
        else:
            cols.append(random_complex(rng, n))
    Z = np.stack(cols, axis=-1)
    if chart.sphere:
        idx = list(chart.sphere)
        Z[:, idx] /= np.linalg.norm(Z[:, idx], axis=-1, keepdims=True)
    return Z


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
