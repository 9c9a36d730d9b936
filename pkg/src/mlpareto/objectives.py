"""Per-layer cut and RatioCut objectives, incremental move deltas, NMI.

``cut`` follows the ordered-pair sum: every undirected edge leaving a
community is counted once for that community, so summing ``cut`` over all
communities counts each crossing edge twice. RatioCut halves that sum after
dividing each community's cut by its size. Empty communities contribute 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .network import MultiLayerNetwork, Partition, _check_index


@dataclass(frozen=True)
class ObjectiveVector:
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise InputError("objective values must be non-negative")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True)
class MoveDelta:
    vertex: int
    from_community: int
    to_community: int
    delta_per_layer: tuple[float, ...]


def _check_same_p(network: MultiLayerNetwork, partition: Partition) -> None:
    if partition.p != network.p:
        raise InputError(f"partition covers {partition.p} vertices, network has {network.p}")


def community_cuts(network: MultiLayerNetwork, layer: int, partition: Partition) -> np.ndarray:
    """Ordered-pair cut of every community in one layer, as an int array of length k."""
    _check_index(layer, network.L, "layer")
    _check_same_p(network, partition)
    A = network.layers[layer].tocoo()
    lab = partition.assignment
    crossing = lab[A.row] != lab[A.col]
    return np.bincount(lab[A.row[crossing]], minlength=partition.k).astype(np.int64)


def ratio_from_counts(cuts: np.ndarray, sizes: np.ndarray) -> float:
    """RatioCut from per-community cut counts and sizes (0/0 taken as 0)."""
    nonempty = sizes > 0
    terms = np.zeros(len(cuts), dtype=np.float64)
    terms[nonempty] = cuts[nonempty] / sizes[nonempty]
    return 0.5 * float(terms.sum())


def cut(network: MultiLayerNetwork, layer: int, partition: Partition, community: int) -> float:
    _check_index(community, partition.k, "community")
    return float(community_cuts(network, layer, partition)[community])


def ratio_cut(network: MultiLayerNetwork, layer: int, partition: Partition) -> float:
    return ratio_from_counts(community_cuts(network, layer, partition), partition.sizes)


def objective_vector(network: MultiLayerNetwork, partition: Partition) -> ObjectiveVector:
    return ObjectiveVector(tuple(ratio_cut(network, l, partition) for l in range(network.L)))


def _term(c, n):
    n = np.asarray(n, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    out = np.zeros(np.broadcast(c, n).shape)
    np.divide(c, n, out=out, where=n > 0)
    return out


def _delta(cuts, sizes, a, b, deg, d_a, d_b):
    """RatioCut change for moving vertices from community ``a`` to ``b``.

    ``deg`` is the vertex degree, ``d_a``/``d_b`` its neighbour counts in
    ``a``/``b``. Broadcasts over candidate arrays.
    """
    new_cut_a = cuts[a] - deg + 2 * d_a
    new_cut_b = cuts[b] + deg - 2 * d_b
    return 0.5 * (
        _term(new_cut_a, sizes[a] - 1) - _term(cuts[a], sizes[a])
        + _term(new_cut_b, sizes[b] + 1) - _term(cuts[b], sizes[b])
    )


def move_delta(
    network: MultiLayerNetwork, partition: Partition, vertex: int, to_community: int
) -> MoveDelta:
    """Per-layer RatioCut change if ``vertex`` moves to ``to_community``."""
    _check_same_p(network, partition)
    _check_index(vertex, network.p, "vertex")
    _check_index(to_community, partition.k, "community")
    a = int(partition.assignment[vertex])
    b = int(to_community)
    if a == b:
        raise InputError(f"vertex {vertex} is already in community {b}")
    sizes = partition.sizes
    deltas = []
    for l in range(network.L):
        cuts = community_cuts(network, l, partition)
        nbr_labels = partition.assignment[network.neighbors(l, vertex)]
        d_a = int(np.count_nonzero(nbr_labels == a))
        d_b = int(np.count_nonzero(nbr_labels == b))
        deltas.append(float(_delta(cuts, sizes, a, b, nbr_labels.size, d_a, d_b)))
    return MoveDelta(int(vertex), a, b, tuple(deltas))


class CutTracker:
    """Mutable per-layer cut bookkeeping for single-vertex moves.

    Keeps community sizes, ordered-pair cuts and a ``p x k`` neighbour-count
    table per layer so that scoring and applying a move costs O(degree).
    All counts are integers, so ``objectives()`` is exactly what a full
    recomputation returns.
    """

    def __init__(self, network: MultiLayerNetwork, partition: Partition):
        _check_same_p(network, partition)
        self.network = network
        self.k = partition.k
        self.labels = partition.assignment.copy()
        self.sizes = partition.sizes
        self.degrees = [network.degrees(l) for l in range(network.L)]
        self.cuts = [community_cuts(network, l, partition) for l in range(network.L)]
        self.nbr_counts = []
        onehot = np.zeros((network.p, self.k), dtype=np.int64)
        onehot[np.arange(network.p), self.labels] = 1
        for l in range(network.L):
            self.nbr_counts.append(np.asarray(network.layers[l].astype(np.int64) @ onehot))

    def partition(self) -> Partition:
        return Partition(self.labels.copy(), self.k)

    def ratio_cut(self, layer: int) -> float:
        return ratio_from_counts(self.cuts[layer], self.sizes)

    def objectives(self) -> ObjectiveVector:
        return ObjectiveVector(tuple(self.ratio_cut(l) for l in range(self.network.L)))

    def deltas(self, layer: int, vertices: np.ndarray, targets: np.ndarray) -> np.ndarray:
        """RatioCut change on ``layer`` for each independent move ``vertices[i] -> targets[i]``."""
        vertices = np.asarray(vertices, dtype=np.int64)
        targets = np.asarray(targets, dtype=np.int64)
        a = self.labels[vertices]
        counts = self.nbr_counts[layer]
        return _delta(
            self.cuts[layer], self.sizes, a, targets,
            self.degrees[layer][vertices], counts[vertices, a], counts[vertices, targets],
        )

    def move(self, vertex: int, to_community: int) -> None:
        a = int(self.labels[vertex])
        b = int(to_community)
        if a == b:
            raise InputError(f"vertex {vertex} is already in community {b}")
        for l in range(self.network.L):
            counts = self.nbr_counts[l]
            deg = int(self.degrees[l][vertex])
            cuts = self.cuts[l]
            cuts[a] += 2 * counts[vertex, a] - deg
            cuts[b] += deg - 2 * counts[vertex, b]
            nbrs = self.network.neighbors(l, vertex)
            counts[nbrs, a] -= 1
            counts[nbrs, b] += 1
        self.sizes[a] -= 1
        self.sizes[b] += 1
        self.labels[vertex] = b


def confusion_matrix(a: Partition, b: Partition) -> np.ndarray:
    if a.p != b.p:
        raise InputError(f"partition lengths differ: {a.p} vs {b.p}")
    m = np.zeros((a.k, b.k), dtype=np.int64)
    np.add.at(m, (a.assignment, b.assignment), 1)
    return m


def _entropy(counts: np.ndarray, n: int) -> float:
    q = counts[counts > 0] / n
    return float(-(q * np.log(q)).sum())


def nmi(a: Partition, b: Partition) -> float:
    """Normalized mutual information with arithmetic-mean normalization.

    Two single-cluster partitions give 0/0, defined here as 1.
    """
    m = confusion_matrix(a, b)
    n = a.p
    if n == 0:
        return 1.0
    h_a = _entropy(m.sum(axis=1), n)
    h_b = _entropy(m.sum(axis=0), n)
    denom = 0.5 * (h_a + h_b)
    if denom == 0.0:
        return 1.0
    joint = m / n
    outer = np.outer(m.sum(axis=1), m.sum(axis=0)) / (n * n)
    nz = joint > 0
    mi = float((joint[nz] * np.log(joint[nz] / outer[nz])).sum())
    return float(min(1.0, max(0.0, mi / denom)))
