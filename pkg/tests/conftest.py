"""Shared builders for the test suite.

Everything is seed-driven so failures reproduce; builders return fresh
arrays each call and never share state.
"""

import numpy as np
import pytest

from ledger_obata.liealg import so3
from ledger_obata.metrics import MetricForm, MetricT, form_to_T
from ledger_obata.trees import PartitionPair


def random_pd_form(rng: np.random.Generator, m: int, floor: float = 1e-2) -> MetricForm:
    """Random positive-definite (m-1)x(m-1) form."""
    n = m - 1
    g = rng.normal(size=(n, n))
    return MetricForm(g @ g.T + floor * np.eye(n))


def random_metric(rng: np.random.Generator, m: int) -> MetricT:
    return form_to_T(random_pd_form(rng, m))


def laplacian_metric(m: int, edges: list[tuple[int, int, float]]) -> MetricT:
    """Coefficient matrix of a weighted graph Laplacian on 1-based vertices.

    The graph must be connected with weights making the result positive
    semidefinite of rank m-1 (all positive suffices).
    """
    t = np.zeros((m, m))
    for i, j, w in edges:
        t[i - 1, j - 1] -= w
        t[j - 1, i - 1] -= w
        t[i - 1, i - 1] += w
        t[j - 1, j - 1] += w
    return MetricT(t)


def worked_seven_metric(
    x: tuple[float, ...] = (1.0,) * 6, y: tuple[float, float] = (1.0, 1.0)
) -> MetricT:
    """The m=7 two-summand matrix: triangles 123 and 467 plus rungs 14, 25."""
    x1, x2, x3, x4, x5, x6 = x
    y1, y2 = y
    return laplacian_metric(
        7,
        [
            (1, 2, x1),
            (1, 3, x2),
            (2, 3, x3),
            (4, 6, x4),
            (4, 7, x5),
            (6, 7, x6),
            (1, 4, y1),
            (2, 5, y2),
        ],
    )


SEVEN_SPLIT_PAIR = PartitionPair(
    ((1, 2, 3), (4, 6, 7), (5,)), ((1, 4), (2, 5), (3,), (6,), (7,))
)

DOUBLE_STAR_PAIR = PartitionPair(
    ((1, 2, 3, 4, 5), (6,), (7,)), ((1, 6), (2, 7), (3,), (4,), (5,))
)


def double_star_product(inner: np.ndarray, u1: float = 1.0, u2: float = 1.0) -> MetricT:
    """m=7 product whose 5-copy factor is the given zero-row-sum block.

    Elements 1..5 carry the block; leaves 6 and 7 couple to 1 and 2 with
    weights u1 and u2.  Splitting by DOUBLE_STAR_PAIR recovers the block
    exactly as the second factor.
    """
    t = np.zeros((7, 7))
    t[:5, :5] = inner
    for i, j, w in [(0, 5, u1), (1, 6, u2)]:
        t[i, j] = t[j, i] = -w
        t[i, i] += w
        t[j, j] += w
    return MetricT(t)


def dense_nonreductive_metric(rng: np.random.Generator, m: int) -> MetricT:
    """All-entries-nonzero metric that generically fails every product shape."""
    n = m - 1
    g = rng.normal(size=(n, n))
    form = g @ g.T + float(n) * np.eye(n)
    t = np.zeros((m, m))
    t[:n, :n] = form
    t[n, :] = -t.sum(axis=0)
    t[:, n] = t[n, :]
    t[n, n] = -t[n, :n].sum()
    return MetricT(t)


def random_nodes(rng: np.random.Generator, m: int, min_gap: float = 0.05) -> np.ndarray:
    z = np.sort(rng.uniform(0.5, 4.0, size=m))
    while np.min(np.diff(z)) < min_gap:
        z = np.sort(rng.uniform(0.5, 4.0, size=m))
    return z


@pytest.fixture(scope="session")
def backend():
    return so3()
