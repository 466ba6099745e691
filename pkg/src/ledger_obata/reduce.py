"""Splitting metrics into products and the full isometry group.

A metric splits along an admissible partition pair when every nonzero
off-diagonal coupling joins two copies lying in a common part of one of the
two partitions.  Each factor metric is the compression of the coupling
matrix onto part-indicator columns.  Recursive splitting yields the
irreducible factors; the connected isometry group of the product is the
power F^k with k the sum of the factor orders, equivalently m + s - 1 for
s irreducible factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .classify import NatRedResult, classify_natred, natred_report
from .liealg import StructureConstants, default_backend
from .metrics import EigenData, MetricT, T_to_form, eigendecompose
from .trees import MAX_M_DEFAULT, Partition, PartitionPair, enumerate_partition_pairs

SPLIT_RTOL = 1e-9


def _part_ids(partition: Partition, m: int) -> np.ndarray:
    ids = np.full(m, -1, dtype=int)
    for pi, part in enumerate(partition):
        for label in part:
            ids[label - 1] = pi
    return ids


@dataclass(frozen=True)
class SplitOutcome:
    """Result of testing one partition pair against a metric.

    On success ``summand_first`` and ``summand_second`` carry the two
    coupling matrices whose sum recovers the metric (each supported on one
    partition's parts, diagonals fixed for zero row sums), and ``first``,
    ``second`` hold the compressed factor metrics.
    """

    ok: bool
    pair: PartitionPair
    first: MetricT | None = None
    second: MetricT | None = None
    summand_first: np.ndarray | None = None
    summand_second: np.ndarray | None = None
    violation: tuple[int, int] | None = None
    violation_value: float = 0.0


def factor_metric(metric: MetricT, partition: Partition) -> MetricT:
    """Compress the coupling matrix onto the parts of one partition.

    Column p of the indicator matrix marks the copies in part p; the
    compressed matrix keeps zero row sums and positive definiteness on the
    zero-sum subspace automatically.
    """
    m = metric.m
    x = np.zeros((m, len(partition)))
    for pi, part in enumerate(partition):
        for label in part:
            x[label - 1, pi] = 1.0
    return MetricT(x.T @ metric.matrix @ x)


def _summand(t: np.ndarray, ids: np.ndarray, small: float) -> np.ndarray:
    m = t.shape[0]
    out = np.zeros_like(t)
    for i in range(m):
        for j in range(m):
            if i != j and ids[i] == ids[j] and abs(t[i, j]) > small:
                out[i, j] = t[i, j]
    np.fill_diagonal(out, -out.sum(axis=1))
    return out


def check_split(
    metric: MetricT, pair: PartitionPair, tol_split: float = SPLIT_RTOL
) -> SplitOutcome:
    """Split the metric along the pair, or report the first blocked coupling.

    ``tol_split`` is relative to the largest matrix entry: couplings below
    it count as absent.  Success requires every surviving coupling to join
    two copies sharing a part of one of the partitions; the two summands
    then reassemble the metric exactly up to dropped couplings.
    """
    t = metric.matrix
    m = metric.m
    small = tol_split * float(np.max(np.abs(t)))
    ids1 = _part_ids(pair.first, m)
    ids2 = _part_ids(pair.second, m)
    for i in range(m):
        for j in range(i + 1, m):
            if abs(t[i, j]) <= small:
                continue
            if ids1[i] == ids1[j] or ids2[i] == ids2[j]:
                continue
            return SplitOutcome(
                False, pair, violation=(i + 1, j + 1), violation_value=float(t[i, j])
            )
    return SplitOutcome(
        True,
        pair,
        first=factor_metric(metric, pair.first),
        second=factor_metric(metric, pair.second),
        summand_first=_summand(t, ids1, small),
        summand_second=_summand(t, ids2, small),
    )


@dataclass(frozen=True)
class SplitRecord:
    """One recursive split: ``path`` locates the submetric ('root', 'root.1', ...)."""

    path: str
    m: int
    pair: PartitionPair


@dataclass(frozen=True)
class Decomposition:
    factors: tuple[MetricT, ...]
    records: tuple[SplitRecord, ...]

    @property
    def factor_sizes(self) -> tuple[int, ...]:
        return tuple(f.m for f in self.factors)

    @property
    def is_reducible(self) -> bool:
        return len(self.factors) > 1

    @property
    def isometry_group_exponent(self) -> int:
        """The connected isometry group is F^k for this k."""
        return sum(self.factor_sizes)

    def factor_classifications(self, tol: float = 1e-8) -> tuple[NatRedResult, ...]:
        return tuple(classify_natred(T_to_form(f), tol) for f in self.factors)

    def is_go_manifold(self, tol: float = 1e-8) -> bool:
        """Geodesic orbit with respect to the full isometry group holds
        exactly when every irreducible factor is naturally reductive."""
        return all(r.is_naturally_reductive for r in self.factor_classifications(tol))


def decompose(
    metric: MetricT,
    tol_split: float = SPLIT_RTOL,
    max_m: int = MAX_M_DEFAULT,
    pair_order: Callable[[list[PartitionPair]], list[PartitionPair]] | None = None,
) -> Decomposition:
    """Recursively split into irreducible factors.

    Pairs are tried in canonical enumeration order; ``pair_order`` reorders
    the candidate list (the factor multiset does not depend on the order,
    which the tests exercise by reversing it).
    """
    factors: list[MetricT] = []
    records: list[SplitRecord] = []

    def recurse(current: MetricT, path: str) -> None:
        m = current.m
        if m >= 3:
            pairs = enumerate_partition_pairs(m, max_m=max_m)
            if pair_order is not None:
                pairs = pair_order(list(pairs))
            for pair in pairs:
                outcome = check_split(current, pair, tol_split)
                if outcome.ok:
                    records.append(SplitRecord(path, m, pair))
                    recurse(outcome.first, path + ".1")
                    recurse(outcome.second, path + ".2")
                    return
        factors.append(current)

    recurse(metric, "root")
    return Decomposition(tuple(factors), tuple(records))


def is_reducible(
    metric: MetricT, tol_split: float = SPLIT_RTOL, max_m: int = MAX_M_DEFAULT
) -> bool:
    m = metric.m
    if m < 3:
        return False
    return any(
        check_split(metric, pair, tol_split).ok
        for pair in enumerate_partition_pairs(m, max_m=max_m)
    )


def isometry_group_exponent(
    metric: MetricT, tol_split: float = SPLIT_RTOL, max_m: int = MAX_M_DEFAULT
) -> int:
    """Exponent k with connected isometry group F^k; m <= k <= 2(m-1)."""
    return decompose(metric, tol_split, max_m).isometry_group_exponent


def go_manifold(
    metric: MetricT,
    tol: float = 1e-8,
    tol_split: float = SPLIT_RTOL,
    max_m: int = MAX_M_DEFAULT,
) -> bool:
    """True when every irreducible factor is naturally reductive."""
    return decompose(metric, tol_split, max_m).is_go_manifold(tol)


# -- connection operators and invariance of a splitting ----------------------


def holonomy_generators(
    metric: MetricT,
    backend: StructureConstants | None = None,
    cluster_tol: float = 1e-8,
) -> tuple[list[np.ndarray], EigenData]:
    """Connection operators (doubled) over a concrete backend algebra.

    Operators act on coefficient space indexed by (i, q) -> i * d + q where
    i runs over the eigen directions b^1..b^(m-1) and q over the backend
    basis.  Isotropy directions contribute 2 ad_q blocks; the direction
    b^k tensor E_p sends b^i tensor E_q to
    sum_j ((gamma_i + gamma_j - gamma_k) / gamma_j)
    ((b^k <> b^i) . b^j) b^j tensor [E_p, E_q].
    """
    sc = backend if backend is not None else default_backend()
    eigen = eigendecompose(metric, cluster_tol)
    vectors = eigen.system.vectors
    gammas = eigen.system.gammas
    n = vectors.shape[0]
    d = sc.dim
    ads = [sc.ad(np.eye(d)[p]) for p in range(d)]
    ops: list[np.ndarray] = []
    for p in range(d):
        ops.append(2.0 * np.kron(np.eye(n), ads[p]))
    # coupling[k, i, j] = (b^k <> b^i) . b^j
    coupling = (vectors[:, None, :] * vectors[None, :, :]) @ vectors.T
    for k in range(n):
        weight = (gammas[None, :] + gammas[:, None] - gammas[k]) / gammas[None, :]
        mat = coupling[k] * weight
        for p in range(d):
            ops.append(np.kron(mat.T, ads[p]))
    return ops, eigen


def splitting_subspaces(
    pair: PartitionPair, m: int
) -> tuple[np.ndarray, np.ndarray]:
    """Tangent subspaces of the two factors inside the zero-sum space.

    The factor built from one partition is tangent along vectors constant
    on each part of that partition, projected to zero mean.  Returns
    orthonormal row bases, dims m1 - 1 and m2 - 1.
    """

    def span(partition: Partition) -> np.ndarray:
        rows = np.zeros((len(partition), m))
        for pi, part in enumerate(partition):
            rows[pi, [label - 1 for label in part]] = 1.0
        rows = rows - rows.mean(axis=1, keepdims=True)
        _, svals, vt = np.linalg.svd(rows)
        rank = int(np.sum(svals > 1e-12 * svals[0]))
        return vt[:rank]

    return span(pair.first), span(pair.second)


def invariance_residual(
    ops: Sequence[np.ndarray],
    subspace_rows: np.ndarray,
    eigen: EigenData,
    dim_backend: int,
) -> float:
    """Largest leakage of the operators out of the given tangent subspace.

    ``subspace_rows`` is an orthonormal basis in the zero-sum space; it is
    rewritten in the eigen coordinates and tensored with the backend space.
    """
    coeff = subspace_rows @ eigen.system.vectors.T
    proj = np.kron(coeff.T @ coeff, np.eye(dim_backend))
    comp = np.eye(proj.shape[0]) - proj
    worst = 0.0
    for op in ops:
        worst = max(worst, float(np.max(np.abs(comp @ op @ proj))))
    return worst


def decompose_report(
    metric: MetricT,
    tol: float = 1e-8,
    tol_split: float = SPLIT_RTOL,
    max_m: int = MAX_M_DEFAULT,
) -> dict:
    """JSON-ready summary of the decomposition and the group it certifies."""
    decomp = decompose(metric, tol_split, max_m)
    factors = [
        {"m": factor.m, "T": factor.matrix, "natred": natred_report(result)}
        for factor, result in zip(decomp.factors, decomp.factor_classifications(tol))
    ]
    return {
        "m": metric.m,
        "reducible": decomp.is_reducible,
        "factor_sizes": list(decomp.factor_sizes),
        "factors": factors,
        "isometry_group_k": decomp.isometry_group_exponent,
        "go_manifold": decomp.is_go_manifold(tol),
        "splits": [
            {
                "path": rec.path,
                "m": rec.m,
                "first": [list(p) for p in rec.pair.first],
                "second": [list(p) for p in rec.pair.second],
                "tree_edges": [list(e) for e in rec.pair.tree_edges()],
            }
            for rec in decomp.records
        ],
    }
