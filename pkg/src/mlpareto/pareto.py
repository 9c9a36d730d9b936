"""Dominance, non-dominated filtering and the node-swapping frontier traversal."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InputError
from .network import MultiLayerNetwork, Partition
from .objectives import CutTracker, ObjectiveVector, confusion_matrix, objective_vector
from .spectral import SpectralConfig, spectral_partition

# relative slack for treating two candidate costs as tied
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class FrontierPoint:
    partition: Partition
    objectives: ObjectiveVector
    step: int


@dataclass(frozen=True)
class FrontierResult:
    path: tuple[FrontierPoint, ...]
    front: tuple[FrontierPoint, ...]

    @property
    def front_steps(self) -> list[int]:
        return [pt.step for pt in self.front]


def _values(v) -> tuple[float, ...]:
    if isinstance(v, FrontierPoint):
        v = v.objectives
    return tuple(v)


def dominates(a, b) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere."""
    a, b = _values(a), _values(b)
    if len(a) != len(b):
        raise InputError(f"objective lengths differ: {len(a)} vs {len(b)}")
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def non_dominated_mask(values: np.ndarray) -> np.ndarray:
    """Boolean mask of rows of ``values`` not dominated by any other row."""
    V = np.asarray(values, dtype=np.float64)
    n = V.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        le = np.all(V <= V[i], axis=1)
        lt = np.any(V < V[i], axis=1)
        if np.any(le & lt):
            keep[i] = False
    return keep


def non_dominated_filter(points: Sequence[FrontierPoint]) -> list[FrontierPoint]:
    """Points not dominated by any input point, in input order.

    Points with equal objective vectors never dominate each other, so
    duplicates are all retained.
    """
    points = list(points)
    if not points:
        return []
    lengths = {len(_values(p)) for p in points}
    if len(lengths) != 1:
        raise InputError("inconsistent objective vector lengths")
    mask = non_dominated_mask(np.array([_values(p) for p in points]))
    return [p for p, keep in zip(points, mask) if keep]


def align_labels(c1: Partition, c2: Partition) -> Partition:
    """Relabel ``c2`` to maximise agreement with ``c1``.

    Solves the assignment problem on the confusion matrix. The smaller label
    set is padded with empty communities, so the result has ``max(k1, k2)``
    communities.
    """
    if c1.p != c2.p:
        raise InputError(f"partition lengths differ: {c1.p} vs {c2.p}")
    k = max(c1.k, c2.k)
    m = np.zeros((k, k), dtype=np.int64)
    m[: c1.k, : c2.k] = confusion_matrix(c1, c2)
    rows, cols = linear_sum_assignment(m, maximize=True)
    remap = np.empty(k, dtype=np.int64)
    remap[cols] = rows
    return Partition(remap[c2.assignment], k)


def _pad(c: Partition, k: int) -> Partition:
    return c if c.k == k else Partition(c.assignment, k)


def _walk(
    network: MultiLayerNetwork,
    start: Partition,
    end: Partition,
    score_layer: int,
    step0: int,
    check: bool,
) -> list[FrontierPoint]:
    """Greedy single-vertex walk from ``start`` to ``end``.

    Each step moves, among vertices still off their ``end`` label, the one
    whose move gives the lowest RatioCut on ``score_layer`` (lowest vertex
    index on ties). Returns the points after each move; ``start`` excluded.
    """
    tracker = CutTracker(network, start)
    target = end.assignment
    pending = np.flatnonzero(tracker.labels != target)
    out = []
    step = step0
    while pending.size:
        deltas = tracker.deltas(score_layer, pending, target[pending])
        base = tracker.ratio_cut(score_layer)
        costs = base + deltas
        best = costs.min()
        tied = costs <= best + TIE_RTOL * max(1.0, abs(best))
        pick = int(np.flatnonzero(tied)[0])
        vertex = int(pending[pick])
        if check:
            trial = tracker.partition().with_move(vertex, int(target[vertex]))
            full = objective_vector(network, trial)[score_layer]
            if abs(full - costs[pick]) > 1e-9:
                raise AssertionError(
                    f"incremental cost {costs[pick]!r} disagrees with recomputation {full!r}"
                )
        tracker.move(vertex, int(target[vertex]))
        pending = np.delete(pending, pick)
        step += 1
        out.append(FrontierPoint(tracker.partition(), tracker.objectives(), step))
    return out


def traverse_frontier(
    network: MultiLayerNetwork,
    c1: Partition,
    c2: Partition,
    symmetric: bool = False,
    score_layer: int = 1,
    check: bool = False,
) -> FrontierResult:
    """Walk from ``c1`` to ``c2`` one vertex at a time and filter the path.

    ``c2`` must already be label-aligned to ``c1`` (see ``align_labels``).
    By default candidates are scored on layer 1 (the second layer). With
    ``symmetric=True`` a second walk from ``c2`` back to ``c1`` scored on
    layer 0 is appended to the path (its endpoints are not repeated) before
    filtering. ``check=True`` recomputes every chosen cost from scratch.
    """
    if c1.p != network.p or c2.p != network.p:
        raise InputError("endpoint partitions must cover every vertex")
    if c1.k != c2.k:
        raise InputError(f"endpoint community counts differ: {c1.k} vs {c2.k}")
    if not 0 <= score_layer < network.L:
        raise InputError(f"score layer {score_layer} out of range")
    start = FrontierPoint(c1, objective_vector(network, c1), 0)
    path = [start] + _walk(network, c1, c2, score_layer, 0, check)
    if symmetric and network.L >= 2 and len(path) > 2:
        back_layer = 0 if score_layer != 0 else 1
        back = _walk(network, c2, c1, back_layer, path[-1].step, check)
        path.extend(back[:-1])
    return FrontierResult(tuple(path), tuple(non_dominated_filter(path)))


def _endpoints(network: MultiLayerNetwork, configs: Sequence[SpectralConfig]) -> list[Partition]:
    if len(configs) != network.L:
        raise InputError(f"{len(configs)} spectral configs for {network.L} layers")
    parts = [spectral_partition(network, l, cfg) for l, cfg in enumerate(configs)]
    k = max(p.k for p in parts)
    ref = _pad(parts[0], k)
    return [ref] + [align_labels(ref, p) for p in parts[1:]]


def frontier(
    network: MultiLayerNetwork,
    configs: Sequence[SpectralConfig],
    symmetric: bool = False,
    check: bool = False,
) -> FrontierResult:
    """Spectral endpoints per layer, label alignment, then traversal. Two layers only."""
    if network.L != 2:
        raise InputError(f"frontier needs exactly 2 layers, got {network.L}")
    c1, c2 = _endpoints(network, configs)
    return traverse_frontier(network, c1, c2, symmetric=symmetric, check=check)


def frontier_multilayer(
    network: MultiLayerNetwork,
    configs: Sequence[SpectralConfig],
    check: bool = False,
) -> FrontierResult:
    """Extension beyond two layers (not part of the two-layer method).

    Walks between every ordered pair of layer endpoints ``(i, j)``, scoring
    layer ``j``, concatenates the walks and filters the union. Step indices
    are global; consecutive path points from different walks need not differ
    at a single vertex.
    """
    ends = _endpoints(network, configs)
    path = [FrontierPoint(ends[0], objective_vector(network, ends[0]), 0)]
    seen = {ends[0]}
    for i, j in itertools.permutations(range(network.L), 2):
        start = ends[i]
        if start not in seen:
            path.append(FrontierPoint(start, objective_vector(network, start), path[-1].step + 1))
            seen.add(start)
        for pt in _walk(network, start, ends[j], j, path[-1].step, check):
            if pt.partition not in seen:
                seen.add(pt.partition)
                path.append(FrontierPoint(pt.partition, pt.objectives, path[-1].step + 1))
    return FrontierResult(tuple(path), tuple(non_dominated_filter(path)))


def knee_point(result: FrontierResult) -> FrontierPoint:
    """Front point with the smallest L2 norm after min-max scaling each objective.

    Objectives that are constant across the front scale to 0. Ties go to the
    lowest step.
    """
    if not result.front:
        raise InputError("empty front")
    V = np.array([pt.objectives.values for pt in result.front], dtype=np.float64)
    lo, hi = V.min(axis=0), V.max(axis=0)
    span = hi - lo
    scaled = np.divide(V - lo, span, out=np.zeros_like(V), where=span > 0)
    norms = np.linalg.norm(scaled, axis=1)
    best = norms.min()
    candidates = [pt for pt, n in zip(result.front, norms) if n <= best + 1e-12]
    return min(candidates, key=lambda pt: pt.step)


def hamming(a: Partition, b: Partition) -> int:
    return int(np.count_nonzero(a.assignment != b.assignment))
