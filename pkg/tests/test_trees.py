"""Tests for the admissible partition-pair enumeration."""

import heapq
from itertools import combinations, product

import pytest

from ledger_obata.errors import ParameterError
from ledger_obata.trees import (
    MAX_M_DEFAULT,
    PartitionPair,
    _decode_pruefer,
    enumerate_partition_pairs,
)


def pruefer_decode_heap(seq, size):
    """Reference decoder using a leaf heap instead of a sweeping pointer."""
    degree = [1] * size
    for v in seq:
        degree[v] += 1
    heap = [v for v in range(size) if degree[v] == 1]
    heapq.heapify(heap)
    edges = []
    for v in seq:
        leaf = heapq.heappop(heap)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(heap, v)
    a = heapq.heappop(heap)
    b = heapq.heappop(heap)
    edges.append((a, b))
    return edges


def all_set_partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for smaller in all_set_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [smaller[i] + [head]] + smaller[i + 1 :]
        yield [[head]] + smaller


def admissible_by_rules(p1, p2, m):
    """Direct transcription of the three pairing rules on raw partitions."""
    if len(p1) < 2 or len(p2) < 2 or len(p1) + len(p2) != m + 1:
        return False
    for a in p1:
        for b in p2:
            if len(set(a) & set(b)) > 1:
                return False
    unions1 = set()
    for r in range(1, len(p1)):
        for combo in combinations(p1, r):
            unions1.add(frozenset(x for part in combo for x in part))
    for r in range(1, len(p2)):
        for combo in combinations(p2, r):
            if frozenset(x for part in combo for x in part) in unions1:
                return False
    return True


def canon(partition):
    return tuple(sorted(tuple(sorted(p)) for p in partition))


def edge_set(edges):
    return frozenset(frozenset(e) for e in edges)


def test_pruefer_decoders_agree_exhaustively():
    for size in (4, 5):
        for seq in product(range(size), repeat=size - 2):
            mine = _decode_pruefer(seq, size)
            ref = pruefer_decode_heap(seq, size)
            assert edge_set(mine) == edge_set(ref)
            assert len(mine) == size - 1


def test_pruefer_decoder_random_large():
    import numpy as np

    rng = np.random.default_rng(51)
    for _ in range(200):
        size = int(rng.integers(4, 12))
        seq = tuple(int(x) for x in rng.integers(0, size, size=size - 2))
        mine = _decode_pruefer(seq, size)
        assert edge_set(mine) == edge_set(pruefer_decode_heap(seq, size))


def test_enumeration_matches_rule_filter():
    for m in range(3, 7):
        partitions = [
            [sorted(p) for p in part]
            for part in all_set_partitions(list(range(1, m + 1)))
        ]
        expected = set()
        for p1 in partitions:
            for p2 in partitions:
                if admissible_by_rules(p1, p2, m):
                    expected.add(tuple(sorted((canon(p1), canon(p2)))))
        emitted = {
            tuple(sorted((pair.first, pair.second)))
            for pair in enumerate_partition_pairs(m)
        }
        assert emitted == expected


def test_count_formula():
    for m in range(3, 7):
        count = len(enumerate_partition_pairs(m))
        assert count == (m + 1) ** (m - 2) - 1


def test_emitted_pairs_validate_and_give_trees():
    for pair in enumerate_partition_pairs(5):
        pair.validate()
        m = pair.m
        assert m == 5
        m1, m2 = pair.factor_sizes
        assert m1 + m2 == m + 1
        edges = pair.tree_edges()
        assert len(edges) == m
        # union-find connectivity over m + 1 part vertices
        parent = list(range(m + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in edges:
            ru, rv = find(u), find(v)
            assert ru != rv  # acyclic
            parent[ru] = rv
        assert len({find(x) for x in range(m + 1)}) == 1


def test_validate_rejects_rule_violations():
    # a star tree shape: one side would need a single part
    with pytest.raises(ParameterError, match="two parts"):
        PartitionPair((( 1, 2, 3),), ((1,), (2,), (3,))).validate()
    # wrong part-count balance
    with pytest.raises(ParameterError, match="part counts"):
        PartitionPair(((1, 2), (3, 4)), ((1, 3), (2, 4))).validate()
    # two parts sharing two indices
    with pytest.raises(ParameterError, match="more than one"):
        PartitionPair(
            ((1, 2), (3,), (4,)), ((1, 2), (3, 4))
        ).validate()
    # proper unions {5} and {1, 2, 3, 4} appear on both sides
    with pytest.raises(ParameterError, match="invariant"):
        PartitionPair(
            ((1, 2), (3, 4), (5,)), ((1, 3), (2, 4), (5,))
        ).validate()
    with pytest.raises(ParameterError, match="empty"):
        PartitionPair(((1, 2, 3), ()), ((1,), (2,), (3,))).validate()
    with pytest.raises(ParameterError, match="cover"):
        PartitionPair(((1, 2),), ((1,), (2,), (4,))).validate()
    with pytest.raises(ParameterError, match="overlap"):
        PartitionPair(((1, 2), (2, 3)), ((1,), (2,), (3,))).validate()


def test_enumeration_bounds():
    assert enumerate_partition_pairs(2) == []
    with pytest.raises(ParameterError):
        enumerate_partition_pairs(1)
    with pytest.raises(ParameterError, match="cap"):
        enumerate_partition_pairs(MAX_M_DEFAULT + 1)
    # the cap is adjustable
    assert len(enumerate_partition_pairs(3, max_m=3)) == 3
