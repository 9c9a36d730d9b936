"""Layer construction from raw records: geo proximity and shared-tag layers.

Distances are great-circle (haversine) kilometres on a sphere of radius
6371 km; a pair at distance exactly ``delta`` is connected.
"""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

EARTH_RADIUS_KM = 6371.0


@dataclass(frozen=True)
class GeoPoint:
    user_id: str
    latitude: float
    longitude: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.latitude <= 90.0:
            raise InputError(f"latitude {self.latitude} out of range [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise InputError(f"longitude {self.longitude} out of range [-180, 180]")


@dataclass(frozen=True)
class TagRecord:
    user_id: str
    tag: str

    def __post_init__(self) -> None:
        norm = normalize_tag(self.tag)
        if not norm:
            raise InputError(f"empty tag for user {self.user_id!r}")
        object.__setattr__(self, "tag", norm)


@dataclass(frozen=True)
class GeoLayerConfig:
    delta: float = 50.0
    radius_km: float = EARTH_RADIUS_KM

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise InputError(f"delta must be positive, got {self.delta}")


def normalize_tag(tag: str) -> str:
    return tag.strip().lstrip("#").strip().lower()


def haversine_km(lat1, lon1, lat2, lon2, radius: float = EARTH_RADIUS_KM):
    """Great-circle distance in km; broadcasts over numpy arrays."""
    phi1, phi2 = np.radians(lat1), np.radians(lat2)
    dphi = phi2 - phi1
    dlam = np.radians(lon2) - np.radians(lon1)
    h = np.sin(dphi / 2) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlam / 2) ** 2
    return 2 * radius * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


def representative_points(points: Iterable[GeoPoint]) -> list[GeoPoint]:
    """Collapse each user's points to the component-wise median, sorted by user id."""
    by_user: dict[str, list[GeoPoint]] = defaultdict(list)
    for pt in points:
        by_user[pt.user_id].append(pt)
    out = []
    for user in sorted(by_user):
        pts = by_user[user]
        out.append(GeoPoint(
            user,
            float(np.median([p.latitude for p in pts])),
            float(np.median([p.longitude for p in pts])),
        ))
    return out


def build_geo_layer(points: Sequence[GeoPoint], config: GeoLayerConfig) -> list[tuple[int, int]]:
    """Edges ``(i, j)``, ``i < j``, between users within ``config.delta`` km.

    Indices refer to positions in ``points``, which must hold one point per user.
    """
    seen = set()
    for pt in points:
        if pt.user_id in seen:
            raise InputError(f"duplicate user_id {pt.user_id!r}")
        seen.add(pt.user_id)
    if not points:
        return []
    lat = np.array([p.latitude for p in points])
    lon = np.array([p.longitude for p in points])
    edges = []
    # row blocks keep memory at O(block * p)
    block = 512
    for start in range(0, len(points), block):
        stop = min(start + block, len(points))
        d = haversine_km(lat[start:stop, None], lon[start:stop, None], lat[None, :], lon[None, :],
                         config.radius_km)
        ii, jj = np.nonzero(d <= config.delta)
        ii = ii + start
        keep = ii < jj
        edges.extend(zip(ii[keep].tolist(), jj[keep].tolist()))
    return sorted(edges)


def user_tags(records: Iterable[TagRecord], tag_whitelist: Iterable[str]) -> dict[str, set[str]]:
    """Whitelisted tags per user; users without any whitelisted tag are omitted."""
    whitelist = {normalize_tag(t) for t in tag_whitelist}
    whitelist.discard("")
    if not whitelist:
        raise InputError("tag whitelist is empty")
    out: dict[str, set[str]] = defaultdict(set)
    for rec in records:
        if rec.tag in whitelist:
            out[rec.user_id].add(rec.tag)
    return dict(out)


def build_tag_layer(
    records: Sequence[TagRecord],
    tag_whitelist: Iterable[str],
    users: Sequence[str] | None = None,
) -> tuple[list[str], list[tuple[int, int]]]:
    """Connect users sharing at least one whitelisted tag.

    Returns ``(users, edges)``. Without ``users`` the universe is every user
    holding a whitelisted tag, sorted; a supplied universe keeps its order
    and may include isolated users.
    """
    tags = user_tags(records, tag_whitelist)
    if users is None:
        users = sorted(tags)
    index = {u: i for i, u in enumerate(users)}
    by_tag: dict[str, list[int]] = defaultdict(list)
    for user, ts in tags.items():
        if user in index:
            for t in ts:
                by_tag[t].append(index[user])
    edges = set()
    for members in by_tag.values():
        members.sort()
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                edges.add((members[a], members[b]))
    return list(users), sorted(edges)


def align_universes(geo_users: Sequence[str], tag_users: Sequence[str]):
    """Common users in lexicographic order, plus index maps from each source.

    Returns ``(common, geo_map, tag_map)`` where ``geo_map[i]`` is the common
    index of ``geo_users[i]`` (absent when the user is not shared).
    """
    common = sorted(set(geo_users) & set(tag_users))
    if not common:
        raise InputError("geo and tag user sets do not intersect")
    pos = {u: i for i, u in enumerate(common)}
    geo_map = {i: pos[u] for i, u in enumerate(geo_users) if u in pos}
    tag_map = {i: pos[u] for i, u in enumerate(tag_users) if u in pos}
    return common, geo_map, tag_map


def _open_csv(path: Path, header: Sequence[str]):
    fh = open(path, newline="", encoding="utf-8")
    reader = csv.reader(fh)
    first = next(reader, None)
    if first is None or [h.strip() for h in first] != list(header):
        fh.close()
        raise InputError(f"{path}: line 1: expected header {','.join(header)!r}, got {first!r}")
    return fh, reader


def read_geo_csv(path) -> list[GeoPoint]:
    path = Path(path)
    fh, reader = _open_csv(path, ("user_id", "latitude", "longitude"))
    out = []
    with fh:
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise InputError(f"{path}: line {line}: expected 3 fields, got {len(row)}")
            try:
                lat, lon = float(row[1]), float(row[2])
            except ValueError:
                raise InputError(f"{path}: line {line}: non-numeric coordinate") from None
            if not (math.isfinite(lat) and math.isfinite(lon)):
                raise InputError(f"{path}: line {line}: non-finite coordinate")
            try:
                out.append(GeoPoint(row[0].strip(), lat, lon))
            except InputError as exc:
                raise InputError(f"{path}: line {line}: {exc}") from None
    return out


def read_tag_csv(path) -> list[TagRecord]:
    path = Path(path)
    fh, reader = _open_csv(path, ("user_id", "tag"))
    out = []
    with fh:
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise InputError(f"{path}: line {line}: expected 2 fields, got {len(row)}")
            try:
                out.append(TagRecord(row[0].strip(), row[1]))
            except InputError as exc:
                raise InputError(f"{path}: line {line}: {exc}") from None
    return out
