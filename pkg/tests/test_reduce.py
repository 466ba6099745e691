"""Tests for product splitting, irreducible factors and connection operators."""

import numpy as np
import pytest

from ledger_obata.classify import go_family
from ledger_obata.metrics import MetricT, standard_metric, form_to_T
from ledger_obata.reduce import (
    Decomposition,
    check_split,
    decompose,
    decompose_report,
    factor_metric,
    go_manifold,
    holonomy_generators,
    invariance_residual,
    is_reducible,
    isometry_group_exponent,
    splitting_subspaces,
)
from ledger_obata.serialize import dumps_numeric
from ledger_obata.liealg import so3

from conftest import (
    DOUBLE_STAR_PAIR,
    SEVEN_SPLIT_PAIR,
    dense_nonreductive_metric,
    double_star_product,
    laplacian_metric,
    random_pd_form,
    worked_seven_metric,
)


def test_check_split_positive_reassembles_metric():
    metric = worked_seven_metric()
    outcome = check_split(metric, SEVEN_SPLIT_PAIR)
    assert outcome.ok
    assert outcome.first.m == 3
    assert outcome.second.m == 5
    total = outcome.summand_first + outcome.summand_second
    assert np.max(np.abs(total - metric.matrix)) < 1e-12
    # each summand has zero row sums
    assert np.max(np.abs(outcome.summand_first.sum(axis=1))) < 1e-12
    assert np.max(np.abs(outcome.summand_second.sum(axis=1))) < 1e-12


def test_check_split_reports_blocking_coupling():
    edges = [
        (1, 2, 1.0),
        (1, 3, 1.0),
        (2, 3, 1.0),
        (4, 6, 1.0),
        (4, 7, 1.0),
        (6, 7, 1.0),
        (1, 4, 1.0),
        (2, 5, 1.0),
        (3, 6, 0.5),
    ]
    metric = laplacian_metric(7, edges)
    outcome = check_split(metric, SEVEN_SPLIT_PAIR)
    assert not outcome.ok
    assert outcome.violation == (3, 6)
    assert outcome.violation_value == pytest.approx(-0.5)


def test_decompose_worked_seven_example():
    metric = worked_seven_metric()
    decomp = decompose(metric)
    assert sorted(decomp.factor_sizes) == [2, 2, 3, 3]
    assert decomp.is_reducible
    assert decomp.isometry_group_exponent == 10
    assert decomp.is_go_manifold()
    for result in decomp.factor_classifications():
        assert result.is_naturally_reductive
    # k = m + s - 1 with s irreducible factors
    assert decomp.isometry_group_exponent == 7 + len(decomp.factors) - 1


def test_decompose_is_order_independent():
    rng = np.random.default_rng(61)
    for metric in (
        worked_seven_metric(tuple(rng.uniform(0.5, 2.0, 6)), tuple(rng.uniform(0.5, 2.0, 2))),
        laplacian_metric(4, [(1, 4, 2.0), (2, 4, 1.0), (3, 4, 0.5)]),
        double_star_product(dense_nonreductive_metric(rng, 5).matrix),
    ):
        forward = decompose(metric)
        backward = decompose(metric, pair_order=lambda pairs: pairs[::-1])
        assert sorted(forward.factor_sizes) == sorted(backward.factor_sizes)
        assert (
            forward.isometry_group_exponent == backward.isometry_group_exponent
        )


def test_diagonal_metric_splits_into_edges():
    metric = form_to_T(random_pd_form(np.random.default_rng(3), 2))
    assert not is_reducible(metric)

    diag = laplacian_metric(4, [(1, 4, 2.0), (2, 4, 1.0), (3, 4, 0.5)])
    decomp = decompose(diag)
    assert sorted(decomp.factor_sizes) == [2, 2, 2]
    assert decomp.isometry_group_exponent == 6
    assert isometry_group_exponent(diag) == 6


def test_exponent_bounds_and_irreducible_case():
    rng = np.random.default_rng(7)
    for m in (3, 4, 5):
        dense = dense_nonreductive_metric(rng, m)
        decomp = decompose(dense)
        assert decomp.factor_sizes == (m,)
        assert not decomp.is_reducible
        assert decomp.isometry_group_exponent == m
        if m >= 4:
            # a dense generic block is not naturally reductive once m > 3
            assert not decomp.is_go_manifold()
            assert not go_manifold(dense)
    for m in (3, 4, 5, 6):
        k = isometry_group_exponent(standard_metric(m))
        assert m <= k <= 2 * (m - 1)


def test_double_star_split_recovers_inner_block():
    rng = np.random.default_rng(11)
    inner = dense_nonreductive_metric(rng, 5).matrix
    metric = double_star_product(inner, u1=0.8, u2=1.3)
    outcome = check_split(metric, DOUBLE_STAR_PAIR)
    assert outcome.ok
    assert outcome.second.m == 5
    assert np.max(np.abs(outcome.second.matrix - inner)) < 1e-12
    decomp = decompose(metric)
    assert sorted(decomp.factor_sizes) == [2, 2, 5]
    assert decomp.isometry_group_exponent == 9
    assert not decomp.is_go_manifold()


def test_factor_metric_compression():
    metric = worked_seven_metric()
    part = SEVEN_SPLIT_PAIR.first
    factor = factor_metric(metric, part)
    assert factor.m == len(part)
    x = np.zeros((7, len(part)))
    for pi, p in enumerate(part):
        for label in p:
            x[label - 1, pi] = 1.0
    assert np.allclose(factor.matrix, x.T @ metric.matrix @ x)


def test_holonomy_isotropy_blocks(backend):
    metric, _, _ = go_family(np.array([1.0, 2.0, 3.0, 4.5]), rho=1.0, lam=0.1)
    ops, eigen = holonomy_generators(metric, backend)
    n = metric.m - 1
    d = backend.dim
    assert len(ops) == d + n * d
    for p in range(d):
        expected = 2.0 * np.kron(np.eye(n), backend.ad(np.eye(d)[p]))
        assert np.array_equal(ops[p], expected)


def test_holonomy_tangent_blocks_independent_formula(backend):
    metric, _, _ = go_family(np.array([0.8, 1.7, 2.9, 3.4]), rho=1.2, lam=0.05)
    ops, eigen = holonomy_generators(metric, backend)
    v = eigen.system.vectors
    gammas = eigen.system.gammas
    n, m = v.shape
    d = backend.dim
    coupling = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                coupling[k, i, j] = float(np.sum(v[k] * v[i] * v[j]))
    big_a = np.kron(np.diag(gammas), np.eye(d))
    big_a_inv = np.kron(np.diag(1.0 / gammas), np.eye(d))
    for k in range(n):
        for p in range(d):
            dmat = np.kron(coupling[k].T, backend.ad(np.eye(d)[p]))
            expected = dmat + big_a_inv @ dmat @ big_a - gammas[k] * (big_a_inv @ dmat)
            assert np.max(np.abs(ops[d + k * d + p] - expected)) < 1e-12


def test_invariance_residual_detects_splitting(backend):
    metric = worked_seven_metric()
    ops, eigen = holonomy_generators(metric, backend)
    rows1, rows2 = splitting_subspaces(SEVEN_SPLIT_PAIR, 7)
    assert rows1.shape == (2, 7)
    assert rows2.shape == (4, 7)
    assert np.allclose(rows1 @ rows1.T, np.eye(2), atol=1e-12)
    assert np.allclose(rows2 @ rows2.T, np.eye(4), atol=1e-12)
    # together the two tangent spaces fill the zero-sum hyperplane
    stacked = np.vstack([rows1, rows2])
    svals = np.linalg.svd(stacked, compute_uv=False)
    assert svals[5] > 1e-8
    assert invariance_residual(ops, rows1, eigen, backend.dim) < 1e-8
    assert invariance_residual(ops, rows2, eigen, backend.dim) < 1e-8

    rng = np.random.default_rng(19)
    raw = rng.normal(size=(2, 7))
    raw -= raw.mean(axis=1, keepdims=True)
    q, _ = np.linalg.qr(raw.T)
    random_rows = q.T[:2]
    assert invariance_residual(ops, random_rows, eigen, backend.dim) > 1e-3


def test_decompose_report_is_json_ready():
    report = decompose_report(worked_seven_metric())
    assert report["m"] == 7
    assert report["reducible"] is True
    assert sorted(report["factor_sizes"]) == [2, 2, 3, 3]
    assert report["isometry_group_k"] == 10
    assert report["go_manifold"] is True
    assert all(rec["path"].startswith("root") for rec in report["splits"])
    for factor in report["factors"]:
        assert factor["natred"]["naturally_reductive"] is True
    text = dumps_numeric(report)
    assert '"isometry_group_k": 10' in text
