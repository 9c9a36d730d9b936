"""Single-layer spectral clustering: Laplacian, bottom eigenvectors, k-means."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, InputError
from .network import MultiLayerNetwork, Partition, _check_index

Variant = Literal["unnormalized", "normalized-symmetric"]
VARIANTS = ("unnormalized", "normalized-symmetric")


@dataclass(frozen=True)
class SpectralConfig:
    k: int
    variant: Variant = "unnormalized"
    kmeans_restarts: int = 10
    kmeans_max_iters: int = 100
    eig_tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InputError(f"k must be positive, got {self.k}")
        if self.variant not in VARIANTS:
            raise InputError(f"unknown Laplacian variant {self.variant!r}")
        if self.kmeans_restarts < 1 or self.kmeans_max_iters < 1:
            raise InputError("k-means restarts and iteration cap must be positive")
        if not self.eig_tolerance > 0:
            raise InputError("eig_tolerance must be positive")


@dataclass(frozen=True)
class SpectralEmbedding:
    coordinates: np.ndarray
    eigenvalues: np.ndarray


def laplacian(network: MultiLayerNetwork, layer: int, variant: Variant = "unnormalized") -> np.ndarray:
    """Dense graph Laplacian ``D - A`` or ``I - D^-1/2 A D^-1/2``.

    For the normalized variant, zero-degree vertices get ``D^-1/2 = 0`` so
    their diagonal entry is 1 and their row is otherwise empty.
    """
    _check_index(layer, network.L, "layer")
    if variant not in VARIANTS:
        raise InputError(f"unknown Laplacian variant {variant!r}")
    A = network.adjacency(layer).astype(np.float64)
    deg = A.sum(axis=1)
    if variant == "unnormalized":
        return np.diag(deg) - A
    inv_sqrt = np.zeros_like(deg)
    np.divide(1.0, np.sqrt(deg), out=inv_sqrt, where=deg > 0)
    return np.eye(len(deg)) - inv_sqrt[:, None] * A * inv_sqrt[None, :]


def embed(laplacian_matrix: np.ndarray, k: int, eig_tolerance: float = 1e-8) -> SpectralEmbedding:
    """Eigenvectors of the ``k`` smallest eigenvalues, as columns.

    Raises ConvergenceError when any residual ``||Lv - lv||`` exceeds
    ``eig_tolerance`` scaled by ``max(1, ||L||_inf)``.
    """
    M = np.asarray(laplacian_matrix, dtype=np.float64)
    n = M.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"k={k} outside [1, {n}]")
    try:
        vals, vecs = scipy.linalg.eigh(M, subset_by_index=[0, k - 1])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from exc
    scale = max(1.0, float(np.abs(M).sum(axis=1).max(initial=0.0)))
    residuals = np.linalg.norm(M @ vecs - vecs * vals, axis=0)
    if residuals.size and residuals.max() > eig_tolerance * scale:
        raise ConvergenceError(
            f"eigenpair residual {residuals.max():.3e} exceeds tolerance {eig_tolerance:.1e}"
        )
    # fix each eigenvector's sign so its largest-magnitude entry is positive
    pivot = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[pivot, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return SpectralEmbedding(vecs * signs, vals)


def _kmeanspp(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[c] = X[idx]
        d2 = np.minimum(d2, ((X - centers[c]) ** 2).sum(axis=1))
    return centers


def _fill_empty(X: np.ndarray, labels: np.ndarray, centers: np.ndarray, k: int) -> None:
    """Give every empty cluster the point farthest from its current center."""
    for c in range(k):
        sizes = np.bincount(labels, minlength=k)
        if sizes[c] > 0:
            continue
        d2 = ((X - centers[labels]) ** 2).sum(axis=1)
        d2[sizes[labels] <= 1] = -1.0
        idx = int(np.argmax(d2))
        labels[idx] = c
        centers[c] = X[idx]


def _lloyd(X: np.ndarray, k: int, max_iters: int, rng: np.random.Generator):
    centers = _kmeanspp(X, k, rng)
    labels = None
    for _ in range(max_iters):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new = np.argmin(d2, axis=1)
        _fill_empty(X, new, centers, k)
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for c in range(k):
            centers[c] = X[labels == c].mean(axis=0)
    inertia = float(((X - centers[labels]) ** 2).sum())
    return labels, inertia


def kmeans(
    embedding: SpectralEmbedding | np.ndarray,
    k: int,
    restarts: int = 10,
    max_iters: int = 100,
    seed: int = 0,
) -> Partition:
    """Lloyd's k-means with k-means++ seeding; best inertia over restarts.

    Ties in inertia keep the earliest restart. Output clusters are never empty.
    """
    X = embedding.coordinates if isinstance(embedding, SpectralEmbedding) else np.asarray(embedding)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n = X.shape[0]
    if not 1 <= k <= n:
        raise InputError(f"k={k} must lie in [1, {n}]")
    rng = np.random.default_rng(seed)
    best_labels, best_inertia = None, np.inf
    for _ in range(restarts):
        labels, inertia = _lloyd(X, k, max_iters, rng)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return Partition(_canonical_labels(best_labels), k)


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel communities in order of first appearance."""
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    remap = np.empty(labels.max() + 1, dtype=np.int64)
    remap[np.unique(labels)[order]] = np.arange(order.size)
    return remap[labels]


def spectral_partition(network: MultiLayerNetwork, layer: int, config: SpectralConfig) -> Partition:
    """Cluster one layer: Laplacian, bottom-k eigenvectors, then k-means."""
    if config.k > network.p:
        raise InputError(f"k={config.k} exceeds vertex count {network.p}")
    emb = embed(laplacian(network, layer, config.variant), config.k, config.eig_tolerance)
    X = emb.coordinates
    if config.variant == "normalized-symmetric":
        norms = np.linalg.norm(X, axis=1, keepdims=True)
        X = np.divide(X, norms, out=np.zeros_like(X), where=norms > 0)
    return kmeans(X, config.k, config.kmeans_restarts, config.kmeans_max_iters, config.seed)
