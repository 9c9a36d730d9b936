"""JSON bundle and result files, plus the density grid export."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import InputError
from .layers import (
    GeoLayerConfig,
    align_universes,
    build_geo_layer,
    build_tag_layer,
    read_geo_csv,
    read_tag_csv,
    representative_points,
    user_tags,
)
from .network import MultiLayerNetwork, Partition, build_network
from .objectives import objective_vector
from .pareto import FrontierResult

SCHEMA_VERSION = 1
LAYER_NAMES = ("geo", "tag")


@dataclass
class NetworkBundle:
    network: MultiLayerNetwork
    coordinates: np.ndarray | None = None
    tags: list[list[str]] | None = None
    layer_names: tuple[str, ...] = LAYER_NAMES
    provenance: dict[str, Any] = field(default_factory=dict)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def build_bundle(geo_csv, tag_csv, whitelist: Sequence[str], delta_km: float) -> NetworkBundle:
    """Read both CSVs and build the two-layer (geo, tag) network on the shared users."""
    geo_csv, tag_csv = Path(geo_csv), Path(tag_csv)
    config = GeoLayerConfig(delta=delta_km)
    points = representative_points(read_geo_csv(geo_csv))
    records = read_tag_csv(tag_csv)
    tags_by_user = user_tags(records, whitelist)
    if not tags_by_user:
        raise InputError("no tag records match the whitelist; tag layer would be empty")
    common, _, _ = align_universes([p.user_id for p in points], sorted(tags_by_user))
    keep = set(common)
    geo_points = [p for p in points if p.user_id in keep]
    _, tag_edges = build_tag_layer(records, whitelist, users=common)
    geo_edges = build_geo_layer(geo_points, config)
    network = build_network([geo_edges, tag_edges], len(common), common)
    coords = np.array([[p.latitude, p.longitude] for p in geo_points])
    tags = [sorted(tags_by_user[u]) for u in common]
    provenance = {
        "delta_km": float(delta_km),
        "whitelist": sorted({t.strip().lstrip("#").lower() for t in whitelist if t.strip()}),
        "inputs": {
            "geo": {"file": geo_csv.name, "sha256": _sha256(geo_csv)},
            "tags": {"file": tag_csv.name, "sha256": _sha256(tag_csv)},
        },
    }
    return NetworkBundle(network, coords, tags, LAYER_NAMES, provenance)


def dump_json(obj: Any, path) -> None:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if not isinstance(data, dict) or data.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"{path}: missing or unsupported schema_version")
    return data


def bundle_to_dict(bundle: NetworkBundle) -> dict:
    net = bundle.network
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "network_bundle",
        "p": net.p,
        "vertex_labels": list(net.vertex_labels) if net.vertex_labels else None,
        "layer_names": list(bundle.layer_names),
        "layers": [[list(e) for e in net.edge_list(l)] for l in range(net.L)],
        "coordinates": None if bundle.coordinates is None else bundle.coordinates.tolist(),
        "tags": bundle.tags,
        "provenance": bundle.provenance,
    }


def write_bundle(bundle: NetworkBundle, path) -> None:
    dump_json(bundle_to_dict(bundle), path)


def read_bundle(path) -> NetworkBundle:
    data = load_json(path)
    if data.get("kind") != "network_bundle":
        raise InputError(f"{path}: not a network bundle")
    try:
        net = build_network([[tuple(e) for e in layer] for layer in data["layers"]],
                            int(data["p"]), data.get("vertex_labels"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed bundle: {exc}") from None
    coords = data.get("coordinates")
    return NetworkBundle(
        net,
        None if coords is None else np.asarray(coords, dtype=np.float64).reshape(-1, 2),
        data.get("tags"),
        tuple(data.get("layer_names") or [f"layer{l}" for l in range(net.L)]),
        data.get("provenance") or {},
    )


def partition_to_dict(network: MultiLayerNetwork, partition: Partition, **meta) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "partition",
        "k": partition.k,
        "assignment": partition.assignment.tolist(),
        "ratio_cut": list(objective_vector(network, partition).values),
    }
    out.update(meta)
    return out


def frontier_to_dict(result: FrontierResult, selected_step: int | None = None, **meta) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": "frontier",
        "path": [
            {"step": pt.step, "assignment": pt.partition.assignment.tolist(),
             "cuts": list(pt.objectives.values)}
            for pt in result.path
        ],
        "front": result.front_steps,
        "k": result.path[0].partition.k,
        "selected": selected_step,
    }
    out.update(meta)
    return out


def read_partition(path) -> Partition:
    """Assignment from a partition file, or the selected point of a frontier file."""
    data = load_json(path)
    kind = data.get("kind")
    if kind == "partition":
        return Partition(data["assignment"], int(data["k"]))
    if kind == "frontier":
        step = data.get("selected")
        if step is None:
            raise InputError(f"{path}: frontier file has no selected point")
        for pt in data["path"]:
            if pt["step"] == step:
                return Partition(pt["assignment"], int(data["k"]))
        raise InputError(f"{path}: selected step {step} not in path")
    raise InputError(f"{path}: unknown result kind {kind!r}")


def tag_crosstab(bundle: NetworkBundle, partition: Partition) -> tuple[list[str], np.ndarray]:
    """Users per (tag, community); a user with several tags counts once in each row."""
    if bundle.tags is None:
        raise InputError("bundle carries no tag records")
    all_tags = sorted({t for ts in bundle.tags for t in ts})
    row = {t: i for i, t in enumerate(all_tags)}
    table = np.zeros((len(all_tags), partition.k), dtype=np.int64)
    for v, ts in enumerate(bundle.tags):
        for t in ts:
            table[row[t], partition.assignment[v]] += 1
    return all_tags, table


@dataclass(frozen=True)
class DensityGrid:
    """Per-community user counts on an equirectangular lat/lon grid.

    Row 0 is the southernmost band, column 0 the westernmost. Points on the
    upper bbox edge fall in the last row/column.
    """

    bbox: tuple[float, float, float, float]
    shape: tuple[int, int]
    counts: np.ndarray  # (k, rows, cols)


def density_grid(
    coordinates: np.ndarray,
    partition: Partition,
    bbox: tuple[float, float, float, float],
    shape: tuple[int, int],
) -> DensityGrid:
    min_lat, min_lon, max_lat, max_lon = bbox
    rows, cols = shape
    if rows < 1 or cols < 1:
        raise InputError(f"resolution must be positive, got {rows}x{cols}")
    if not (max_lat > min_lat and max_lon > min_lon):
        raise InputError(f"empty bounding box {bbox}")
    coords = np.asarray(coordinates, dtype=np.float64).reshape(-1, 2)
    if coords.shape[0] != partition.p:
        raise InputError("coordinate count does not match partition length")
    lat, lon = coords[:, 0], coords[:, 1]
    inside = (lat >= min_lat) & (lat <= max_lat) & (lon >= min_lon) & (lon <= max_lon)
    r = np.minimum(((lat - min_lat) / (max_lat - min_lat) * rows).astype(np.int64), rows - 1)
    c = np.minimum(((lon - min_lon) / (max_lon - min_lon) * cols).astype(np.int64), cols - 1)
    counts = np.zeros((partition.k, rows, cols), dtype=np.int64)
    np.add.at(counts, (partition.assignment[inside], r[inside], c[inside]), 1)
    return DensityGrid(tuple(bbox), (rows, cols), counts)
