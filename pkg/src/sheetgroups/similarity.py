"""Worksheet and spreadsheet similarity.

Two worksheets *qualify* as a matching pair when their names share a keyword
and their header similarity reaches ``theta_ws``. A spreadsheet pair scores
the fraction of all their worksheets that take part in at least one
qualifying pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Sequence

from .parallel import pmap
from .vectorize import VocabularyMismatch, WorksheetVector


@dataclass(frozen=True)
class SpreadsheetFeatures:
    workbook_id: str
    sheets: tuple[WorksheetVector, ...] = ()

    @property
    def n_sheets(self) -> int:
        return len(self.sheets)


@dataclass(frozen=True)
class PairScore:
    a: str
    b: str
    s_sp: float
    matched: frozenset  # (sheet name in a, sheet name in b)


def similar_name(k1, k2) -> bool:
    """Names match when they share at least one keyword; empty sets never match."""
    return not k1.isdisjoint(k2)


def cosine(w1: WorksheetVector, w2: WorksheetVector) -> float:
    # Sorted-key summation keeps the result bit-identical under argument swap,
    # and makes cosine(v, v) exactly 1.
    dot = 0.0
    small, big = (w1.weights, w2.weights) if len(w1.weights) <= len(w2.weights) else (w2.weights, w1.weights)
    for k in sorted(k for k in small if k in big):
        dot += w1.weights[k] * w2.weights[k]
    if dot == 0.0:
        return 0.0
    return min(1.0, dot / math.sqrt(w1.sq_norm * w2.sq_norm))


def sim_worksheets(w1: WorksheetVector, w2: WorksheetVector) -> float:
    if w1.vocab != w2.vocab:
        raise VocabularyMismatch("worksheet vectors come from different vocabularies")
    if w1.is_zero or w2.is_zero:
        return 1.0 if similar_name(w1.name_keywords, w2.name_keywords) else 0.0
    return cosine(w1, w2)


def sim_spreadsheets(sp1: SpreadsheetFeatures, sp2: SpreadsheetFeatures, theta_ws: float) -> PairScore:
    phi = set()
    matched = set()
    for i, w1 in enumerate(sp1.sheets):
        for j, w2 in enumerate(sp2.sheets):
            if similar_name(w1.name_keywords, w2.name_keywords) and sim_worksheets(w1, w2) >= theta_ws:
                phi.add((0, i))
                phi.add((1, j))
                matched.add((w1.sheet_name, w2.sheet_name))
    n = sp1.n_sheets + sp2.n_sheets
    return PairScore(sp1.workbook_id, sp2.workbook_id, len(phi) / n if n else 0.0, frozenset(matched))


def sim_to_group(sp: SpreadsheetFeatures, group: Sequence[SpreadsheetFeatures], theta_ws: float) -> float:
    if not group:
        raise ValueError("group must not be empty")
    return max(sim_spreadsheets(sp, member, theta_ws).s_sp for member in group)


def _row_candidates(features, i):
    """Name-matching worksheet pairs of spreadsheet i against every j > i."""
    sp1 = features[i]
    out = []
    for j in range(i + 1, len(features)):
        sp2 = features[j]
        cands = []
        for a, w1 in enumerate(sp1.sheets):
            for b, w2 in enumerate(sp2.sheets):
                if similar_name(w1.name_keywords, w2.name_keywords):
                    cands.append((sim_worksheets(w1, w2), a, b))
        if cands:
            cands.sort(key=lambda x: (-x[0], x[1], x[2]))
            out.append((j, tuple(cands)))
    return out


class SimilarityIndex:
    """All-pairs cache of worksheet similarities.

    Worksheet scores do not depend on ``theta_ws``, so they are computed once
    and re-thresholded per query.
    """

    def __init__(self, features: Sequence[SpreadsheetFeatures], jobs: int = 1):
        self.features = list(features)
        self.ids = [f.workbook_id for f in self.features]
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("workbook ids must be unique")
        self.sizes = [f.n_sheets for f in self.features]
        rows = pmap(partial(_row_candidates, self.features), range(len(self.features)), jobs)
        # (i, j) with i < j -> candidates sorted by descending worksheet score
        self.candidates = {}
        for i, row in enumerate(rows):
            for j, cands in row:
                self.candidates[(i, j)] = cands

    def pair_score(self, i: int, j: int, theta_ws: float) -> float:
        if i == j:
            raise ValueError("pair_score needs two distinct spreadsheets")
        if i > j:
            i, j = j, i
        n = self.sizes[i] + self.sizes[j]
        phi = set()
        for s, a, b in self.candidates.get((i, j), ()):
            if s < theta_ws:
                break
            phi.add((0, a))
            phi.add((1, b))
        return len(phi) / n if n else 0.0

    def edges(self, theta_ws: float) -> list[tuple[float, int, int]]:
        """Pairs with a positive spreadsheet score at ``theta_ws``, as (s_sp, i, j)."""
        out = []
        for (i, j) in self.candidates:
            s = self.pair_score(i, j, theta_ws)
            if s > 0:
                out.append((s, i, j))
        return out

    def pair_scores(self, theta_ws: float) -> list[tuple[str, str, float]]:
        """Every unordered pair with its score, sorted by (id_a, id_b) and id_a < id_b."""
        rows = []
        n = len(self.ids)
        for i in range(n):
            for j in range(i + 1, n):
                a, b = self.ids[i], self.ids[j]
                if a > b:
                    a, b = b, a
                s = self.pair_score(i, j, theta_ws) if (i, j) in self.candidates else 0.0
                rows.append((a, b, s))
        rows.sort()
        return rows
