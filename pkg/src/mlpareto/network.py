"""Multi-layer network and community partition data model.

Vertices are dense indices ``0..p-1`` shared by every layer. Each layer is a
symmetric binary adjacency matrix without self-loops, stored as CSR.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InputError


@dataclass(frozen=True, eq=False)
class MultiLayerNetwork:
    layers: tuple[sp.csr_matrix, ...]
    vertex_labels: tuple[str, ...] | None = None

    @property
    def p(self) -> int:
        return self.layers[0].shape[0]

    @property
    def L(self) -> int:
        return len(self.layers)

    def adjacency(self, layer: int) -> np.ndarray:
        """Dense 0/1 adjacency matrix of one layer."""
        return self._layer(layer).toarray()

    def neighbors(self, layer: int, vertex: int) -> np.ndarray:
        A = self._layer(layer)
        _check_index(vertex, self.p, "vertex")
        return A.indices[A.indptr[vertex]:A.indptr[vertex + 1]]

    def degrees(self, layer: int) -> np.ndarray:
        A = self._layer(layer)
        return np.diff(A.indptr).astype(np.int64)

    def edge_list(self, layer: int) -> list[tuple[int, int]]:
        """Undirected edges ``(i, j)`` with ``i < j``, sorted."""
        upper = sp.triu(self._layer(layer), k=1).tocoo()
        return sorted(zip(upper.row.tolist(), upper.col.tolist()))

    def edge_count(self, layer: int) -> int:
        return self._layer(layer).nnz // 2

    def _layer(self, layer: int) -> sp.csr_matrix:
        _check_index(layer, self.L, "layer")
        return self.layers[layer]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiLayerNetwork):
            return NotImplemented
        if self.p != other.p or self.L != other.L:
            return False
        if self.vertex_labels != other.vertex_labels:
            return False
        return all((a != b).nnz == 0 for a, b in zip(self.layers, other.layers))


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of each vertex to one of ``k`` communities (empty ones allowed)."""

    assignment: np.ndarray
    k: int
    _sizes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        a = np.asarray(self.assignment)
        if a.ndim != 1:
            raise InputError("assignment must be one-dimensional")
        if a.size and not np.issubdtype(a.dtype, np.integer):
            if not np.all(np.equal(np.mod(a, 1), 0)):
                raise InputError("assignment entries must be integers")
        a = a.astype(np.int64, copy=True)
        if int(self.k) < 1:
            raise InputError(f"k must be positive, got {self.k}")
        if a.size and (a.min() < 0 or a.max() >= self.k):
            raise InputError(f"assignment entries must lie in [0, {self.k})")
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "_sizes", np.bincount(a, minlength=self.k))

    @classmethod
    def from_labels(cls, labels: Sequence[int], k: int | None = None) -> "Partition":
        labels = np.asarray(labels, dtype=np.int64)
        if k is None:
            k = int(labels.max()) + 1 if labels.size else 1
        return cls(labels, k)

    @property
    def p(self) -> int:
        return self.assignment.shape[0]

    @property
    def sizes(self) -> np.ndarray:
        return self._sizes.copy()

    def with_move(self, vertex: int, community: int) -> "Partition":
        a = self.assignment.copy()
        a[vertex] = community
        return Partition(a, self.k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.assignment, other.assignment)

    def __hash__(self) -> int:
        return hash((self.k, self.assignment.tobytes()))

    def __len__(self) -> int:
        return self.p


def _check_index(value: int, bound: int, what: str) -> None:
    if not 0 <= int(value) < bound:
        raise InputError(f"{what} index {value} out of range [0, {bound})")


def build_network(
    edge_lists: Sequence[Iterable[tuple[int, int]]],
    p: int,
    vertex_labels: Sequence[str] | None = None,
) -> MultiLayerNetwork:
    """Build a network from one edge list per layer.

    Edges are symmetrized and deduplicated; self-loops are dropped.
    """
    if len(edge_lists) == 0:
        raise InputError("at least one layer is required")
    if int(p) < 1:
        raise InputError(f"vertex count must be positive, got {p}")
    if vertex_labels is not None:
        vertex_labels = tuple(str(v) for v in vertex_labels)
        if len(vertex_labels) != p:
            raise InputError(f"{len(vertex_labels)} labels given for {p} vertices")

    layers = []
    for l, edges in enumerate(edge_lists):
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= p):
            raise InputError(f"layer {l}: vertex index out of range [0, {p})")
        arr = arr[arr[:, 0] != arr[:, 1]]
        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        A = sp.csr_matrix((np.ones(rows.size, dtype=np.int32), (rows, cols)), shape=(p, p))
        A.sum_duplicates()
        A.data[:] = 1
        A = A.astype(np.int8)
        A.sort_indices()
        layers.append(A)
    return MultiLayerNetwork(tuple(layers), vertex_labels)


def degree(network: MultiLayerNetwork, layer: int, vertex: int) -> int:
    _check_index(layer, network.L, "layer")
    _check_index(vertex, network.p, "vertex")
    A = network.layers[layer]
    return int(A.indptr[vertex + 1] - A.indptr[vertex])


def community_members(partition: Partition, community: int) -> set[int]:
    _check_index(community, partition.k, "community")
    return set(np.flatnonzero(partition.assignment == community).tolist())
