"""Workbook -> per-sheet raw features -> corpus-wide vectors."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import partial
from typing import Sequence

from .grid import Workbook, Worksheet
from .headers import extract_headers
from .parallel import pmap
from .similarity import SpreadsheetFeatures
from .textnorm import TextNormalizer, default_normalizer, is_default_sheet_name
from .vectorize import build_vocabulary, vectorize


@dataclass(frozen=True)
class SheetFeatures:
    """Vocabulary-independent features of one worksheet."""

    workbook: str
    sheet: str
    keywords: frozenset
    terms: dict  # composite header term -> tf
    empty: bool

    @property
    def usable(self) -> bool:
        # Empty sheets with default names carry no signal and would glue
        # unrelated workbooks together.
        return not (self.empty and is_default_sheet_name(self.sheet))

    def to_record(self) -> dict:
        return {
            "workbook": self.workbook,
            "sheet": self.sheet,
            "keywords": sorted(self.keywords),
            "terms": dict(sorted(self.terms.items())),
            "zero": not self.terms,
        }


def header_bag(ws: Worksheet, normalizer: TextNormalizer | None = None) -> Counter:
    norm = normalizer or default_normalizer()
    bag = Counter()
    for text in extract_headers(ws).texts():
        term = norm.normalize_header(text)
        if term is not None:
            bag[term] += 1
    return bag


def sheet_features(wb_id: str, ws: Worksheet, normalizer: TextNormalizer | None = None) -> SheetFeatures:
    norm = normalizer or default_normalizer()
    return SheetFeatures(wb_id, ws.name, norm.sheet_keywords(ws.name),
                         dict(header_bag(ws, norm)), not ws.cells)


def workbook_sheet_features(wb: Workbook, normalizer: TextNormalizer | None = None) -> list[SheetFeatures]:
    return [sheet_features(wb.id, ws, normalizer) for ws in wb.sheets]


def build_features(workbooks: Sequence[Workbook], normalizer: TextNormalizer | None = None,
                   jobs: int = 1) -> list[SpreadsheetFeatures]:
    """Features for every workbook, vectorized over one vocabulary for the whole set.

    Returned in input order. Duplicate ids are an error.
    """
    ids = [wb.id for wb in workbooks]
    if len(set(ids)) != len(ids):
        raise ValueError("workbook ids must be unique")
    norm = normalizer or default_normalizer()
    per_wb = pmap(partial(workbook_sheet_features, normalizer=norm), workbooks, jobs)
    return features_from_sheets(dict(zip(ids, per_wb)), order=ids)


def features_from_sheets(sheets_by_wb: dict, order: Sequence[str] | None = None) -> list[SpreadsheetFeatures]:
    """Vectorize already-extracted sheet features. Unusable sheets are dropped first."""
    usable = {wid: [s for s in sheets if s.usable] for wid, sheets in sheets_by_wb.items()}
    # Vocabulary order is fixed by lexicographic workbook id, then sheet order.
    docs = [s for wid in sorted(usable) for s in usable[wid]]
    vocab = build_vocabulary(list(s.terms) for s in docs)
    out = []
    for wid in order if order is not None else sorted(usable):
        vecs = tuple(
            vectorize(Counter(s.terms).elements(), vocab, sheet_name=s.sheet, keywords=s.keywords)
            for s in usable[wid]
        )
        out.append(SpreadsheetFeatures(wid, vecs))
    return out
