import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import DATA  # noqa: E402

_acceptance: dict[str, str] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240415)


@pytest.fixture
def data_dir():
    return DATA


def random_digraph_matrix(rng, n, density, normalize=False):
    A = rng.uniform(0.0, 1.0, (n, n))
    A = np.where(A == 0, 1.0, A)  # weights in (0, 1]
    A *= rng.random((n, n)) < density
    if normalize and A.sum() > 0:
        A /= A.sum()
    return A


def random_metric(rng, n):
    """One of three small-metric flavours, chosen at random.

    Euclidean points (generic), integer-weighted graph metrics (many ties,
    possibly disconnected), or symmetric integer dissimilarities.
    """
    kind = rng.integers(3)
    if kind == 0:
        P = rng.normal(size=(n, 2))
        return np.sqrt(((P[:, None] - P[None]) ** 2).sum(-1))
    if kind == 1:
        D = np.full((n, n), np.inf)
        np.fill_diagonal(D, 0)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    D[i, j] = D[j, i] = float(rng.integers(1, 4))
        for k in range(n):
            D = np.minimum(D, D[:, k, None] + D[None, k, :])
        return D
    D = rng.integers(1, 5, (n, n)).astype(float)
    D = np.triu(D, 1)
    return D + D.T


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        crit = dict(report.user_properties).get("criterion")
        if crit:
            _acceptance[crit] = "PASS" if report.outcome == "passed" else report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_acceptance, key=lambda c: int(c.split()[0][2:])):
        terminalreporter.write_line(f"{_acceptance[crit]:5s} {crit}")
