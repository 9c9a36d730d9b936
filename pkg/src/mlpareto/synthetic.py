"""Synthetic instances: planted-partition graphs and geo/tag record sets."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .layers import GeoPoint, TagRecord
from .network import MultiLayerNetwork, Partition, build_network


def planted_labels(block_sizes: Sequence[int]) -> np.ndarray:
    return np.repeat(np.arange(len(block_sizes)), block_sizes)


def sbm_edges(labels: np.ndarray, p_in: float, p_out: float, rng: np.random.Generator):
    """Edges ``(i, j)``, ``i < j``, of a stochastic block model with the given labels."""
    labels = np.asarray(labels)
    n = labels.size
    iu, ju = np.triu_indices(n, k=1)
    prob = np.where(labels[iu] == labels[ju], p_in, p_out)
    hit = rng.random(iu.size) < prob
    return list(zip(iu[hit].tolist(), ju[hit].tolist()))


def sbm_network(
    layer_labels: Sequence[np.ndarray],
    p_in: float,
    p_out: float,
    seed: int = 0,
) -> MultiLayerNetwork:
    """One SBM layer per planted labelling, all over the same vertex set."""
    rng = np.random.default_rng(seed)
    n = len(layer_labels[0])
    edges = [sbm_edges(lab, p_in, p_out, rng) for lab in layer_labels]
    return build_network(edges, n)


def disagreeing_labels(p: int, k: int, seed: int = 0) -> tuple[Partition, Partition]:
    """Two balanced k-block labellings that are statistically independent.

    The second labelling is the first composed with a random permutation of
    vertices, so each block of one is spread evenly over the blocks of the
    other.
    """
    rng = np.random.default_rng(seed)
    a = np.arange(p) % k
    b = a[rng.permutation(p)]
    return Partition(a, k), Partition(b, k)


def geo_tag_records(
    n_users: int,
    centers: Sequence[tuple[float, float]],
    tags: Sequence[str],
    spread_deg: float = 0.2,
    seed: int = 0,
) -> tuple[list[GeoPoint], list[TagRecord], np.ndarray, np.ndarray]:
    """Users scattered around geographic centers, each with one tag.

    Geographic cluster and tag are drawn independently. Returns the points,
    the tag records, and the planted geo and tag labels.
    """
    rng = np.random.default_rng(seed)
    geo_lab = rng.integers(len(centers), size=n_users)
    tag_lab = rng.integers(len(tags), size=n_users)
    width = len(str(n_users - 1))
    points, records = [], []
    for u in range(n_users):
        uid = f"u{u:0{width}d}"
        lat0, lon0 = centers[geo_lab[u]]
        lat = float(np.clip(lat0 + rng.normal(0, spread_deg), -90, 90))
        lon = float(np.clip(lon0 + rng.normal(0, spread_deg), -180, 180))
        points.append(GeoPoint(uid, lat, lon))
        records.append(TagRecord(uid, tags[tag_lab[u]]))
    return points, records, geo_lab, tag_lab
