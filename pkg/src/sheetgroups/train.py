"""Threshold learning: exhaustive 0.01-step grid search maximizing overall F."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Mapping, Sequence

from .cluster import Clustering, Thresholds, UnionFind
from .parallel import pmap
from .similarity import SimilarityIndex, SpreadsheetFeatures

log = logging.getLogger(__name__)

GRID = tuple(k / 100 for k in range(1, 101))


class LabelError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledPartition:
    groups: tuple[frozenset, ...]

    def __post_init__(self):
        groups = tuple(frozenset(g) for g in self.groups)
        seen = set()
        for g in groups:
            if len(g) < 2:
                raise LabelError(f"labeled group {sorted(g)} has fewer than 2 members")
            if seen & g:
                raise LabelError(f"labeled groups overlap on {sorted(seen & g)}")
            seen |= g
        object.__setattr__(self, "groups", groups)

    @property
    def ids(self) -> frozenset:
        return frozenset().union(*self.groups) if self.groups else frozenset()


@dataclass
class GridResult:
    best: Thresholds
    best_f: float
    surface: dict = field(default_factory=dict)  # (theta_ws, theta_sp) -> F


def _f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _overall_f(cluster_of: Mapping[str, int], cluster_size: Mapping[int, int], truth: Sequence[frozenset]) -> float:
    """Size-weighted mean over truth groups of the best-matching cluster's F.

    ``cluster_of`` maps an id to its cluster label; ids outside any cluster
    (singletons) are absent.
    """
    num = 0
    total = 0
    for p in truth:
        overlap: dict[int, int] = {}
        for x in p:
            c = cluster_of.get(x)
            if c is not None:
                overlap[c] = overlap.get(c, 0) + 1
        best = 0.0
        for c in sorted(overlap):
            inter = overlap[c]
            f = _f_measure(inter / cluster_size[c], inter / len(p))
            if f > best:
                best = f
        num += len(p) * best
        total += len(p)
    return num / total


def overall_f(clustering: Clustering | Iterable[Iterable[str]], truth: LabeledPartition | Iterable[Iterable[str]]) -> float:
    groups = clustering.member_sets() if isinstance(clustering, Clustering) else [frozenset(c) for c in clustering]
    truth_groups = truth.groups if isinstance(truth, LabeledPartition) else [frozenset(p) for p in truth]
    if not truth_groups:
        raise LabelError("labeled partition is empty")
    cluster_of, size = {}, {}
    for k, g in enumerate(groups):
        size[k] = len(g)
        for x in g:
            cluster_of[x] = k
    return _overall_f(cluster_of, size, truth_groups)


def _sweep_theta_sp(index: SimilarityIndex, truth: Sequence[frozenset], theta_ws: float) -> list[float]:
    """F at every theta_sp on the grid for one theta_ws.

    Walking theta_sp downward only ever adds edges, so one union-find grows
    across the whole sweep and F is recomputed only after a merge.
    """
    edges = sorted(index.edges(theta_ws), key=lambda e: -e[0])
    uf = UnionFind(len(index.ids))
    scores = [0.0] * len(GRID)
    pos = 0
    f = None
    for g in range(len(GRID) - 1, -1, -1):
        theta_sp = GRID[g]
        merged = False
        while pos < len(edges) and edges[pos][0] >= theta_sp:
            _, i, j = edges[pos]
            merged |= uf.union(i, j)
            pos += 1
        if f is None or merged:
            cluster_of, size = {}, {}
            for i, wid in enumerate(index.ids):
                root = uf.find(i)
                if uf.size[root] >= 2:
                    cluster_of[wid] = root
                    size[root] = uf.size[root]
            f = _overall_f(cluster_of, size, truth)
        scores[g] = f
    return scores


def grid_search(features: Sequence[SpreadsheetFeatures], truth: LabeledPartition | Iterable[Iterable[str]],
                jobs: int = 1, index: SimilarityIndex | None = None) -> GridResult:
    """Evaluate all 100 x 100 threshold pairs and return the best.

    Ties go to the smallest theta_ws, then the smallest theta_sp.
    """
    if not isinstance(truth, LabeledPartition):
        truth = LabeledPartition(tuple(truth))
    if not truth.groups:
        raise LabelError("labeled partition is empty")
    known = {f.workbook_id for f in features}
    missing = sorted(truth.ids - known)
    if missing:
        raise LabelError(f"labeled id {missing[0]!r} is not in the corpus")
    if index is None:
        index = SimilarityIndex(features, jobs=jobs)

    rows = pmap(partial(_sweep_theta_sp, index, truth.groups), GRID, jobs)
    surface = {}
    best, best_f = None, -1.0
    for a, theta_ws in enumerate(GRID):
        if (a + 1) % 10 == 0:
            log.info("grid: theta_ws up to %.2f evaluated", theta_ws)
        for b, theta_sp in enumerate(GRID):
            f = rows[a][b]
            surface[(theta_ws, theta_sp)] = f
            if f > best_f:
                best, best_f = Thresholds(theta_ws, theta_sp), f
    return GridResult(best, best_f, surface)


def surface_csv(result: GridResult) -> str:
    lines = ["theta_ws,theta_sp,overall_f"]
    for (a, b), f in sorted(result.surface.items()):
        lines.append(f"{a:.2f},{b:.2f},{f!r}")
    return "\n".join(lines) + "\n"
