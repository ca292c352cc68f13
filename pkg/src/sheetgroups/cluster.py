"""Threshold single-linkage clustering into evolution groups.

A spreadsheet joins a growing group when its best score against any member
reaches ``theta_sp``. Grown to a fixpoint, that is exactly a connected
component of the graph whose edges are the pairs scoring at least
``theta_sp``, so the components are found with union-find instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .similarity import SimilarityIndex, SpreadsheetFeatures

DEFAULT_THETA_WS = 0.60
DEFAULT_THETA_SP = 0.33


@dataclass(frozen=True)
class Thresholds:
    theta_ws: float = DEFAULT_THETA_WS
    theta_sp: float = DEFAULT_THETA_SP

    def __post_init__(self):
        for name in ("theta_ws", "theta_sp"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v!r}")

    def to_dict(self) -> dict:
        return {"theta_ws": self.theta_ws, "theta_sp": self.theta_sp}


@dataclass(frozen=True)
class EvolutionGroup:
    gid: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class Clustering:
    groups: tuple[EvolutionGroup, ...] = ()
    singletons: tuple[str, ...] = ()

    def member_sets(self) -> list[frozenset]:
        return [frozenset(g.members) for g in self.groups]

    def to_manifest(self, thresholds: Thresholds | None = None) -> dict:
        out = {}
        if thresholds is not None:
            out["thresholds"] = thresholds.to_dict()
        out["groups"] = [{"gid": g.gid, "members": list(g.members)} for g in self.groups]
        out["singletons"] = list(self.singletons)
        return out


def manifest_bytes(clustering: Clustering, thresholds: Thresholds | None = None) -> bytes:
    return (json.dumps(clustering.to_manifest(thresholds), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return True


def from_components(components: Iterable[Iterable[str]]) -> Clustering:
    """Clustering from a partition of ids; gids follow each group's smallest id."""
    groups, singletons = [], []
    for comp in components:
        members = tuple(sorted(comp))
        if len(members) >= 2:
            groups.append(members)
        elif members:
            singletons.append(members[0])
    groups.sort()
    return Clustering(
        tuple(EvolutionGroup(f"g{k:04d}", m) for k, m in enumerate(groups, 1)),
        tuple(sorted(singletons)),
    )


def components_at(index: SimilarityIndex, thresholds: Thresholds) -> list[list[str]]:
    uf = UnionFind(len(index.ids))
    for s, i, j in index.edges(thresholds.theta_ws):
        if s >= thresholds.theta_sp:
            uf.union(i, j)
    comps: dict[int, list[str]] = {}
    for i, wid in enumerate(index.ids):
        comps.setdefault(uf.find(i), []).append(wid)
    return list(comps.values())


def cluster(features: Sequence[SpreadsheetFeatures], thresholds: Thresholds,
            jobs: int = 1, index: SimilarityIndex | None = None) -> Clustering:
    """Group spreadsheets; groups have at least two members, the rest are singletons."""
    if index is None:
        index = SimilarityIndex(features, jobs=jobs)
    return from_components(components_at(index, thresholds))
