"""Corpus vocabulary and per-worksheet TF-IDF vectors."""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class VocabularyMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    terms: Mapping[str, int]
    df: tuple[int, ...]
    n_docs: int
    fingerprint: str = field(default="", compare=False)

    def __len__(self):
        return len(self.terms)

    def idf(self, index: int) -> float:
        # Smoothed: never zero, even for a term present in every worksheet.
        return math.log((1 + self.n_docs) / (1 + self.df[index])) + 1.0


def build_vocabulary(bags: Iterable[Iterable[str]]) -> Vocabulary:
    """Document frequency over worksheets; term indices follow first appearance."""
    terms: dict[str, int] = {}
    df: list[int] = []
    n_docs = 0
    for bag in bags:
        n_docs += 1
        for t in dict.fromkeys(bag):
            if t not in terms:
                terms[t] = len(terms)
                df.append(0)
            df[terms[t]] += 1
    digest = hashlib.sha1()
    for t, d in zip(terms, df):
        digest.update(f"{t}\x00{d}\x01".encode())
    digest.update(str(n_docs).encode())
    return Vocabulary(terms, tuple(df), n_docs, digest.hexdigest())


@dataclass(frozen=True)
class WorksheetVector:
    weights: Mapping[int, float]
    sheet_name: str = ""
    name_keywords: frozenset = frozenset()
    vocab: str = ""  # fingerprint of the vocabulary the weights index into
    sq_norm: float = 0.0

    @property
    def is_zero(self) -> bool:
        return not self.weights


def vectorize(bag: Iterable[str], vocab: Vocabulary, *, sheet_name: str = "",
              keywords: Iterable[str] = ()) -> WorksheetVector:
    counts = Counter(bag)
    weights = {}
    for t, tf in counts.items():
        idx = vocab.terms.get(t)
        if idx is None:
            raise VocabularyMismatch(f"term {t!r} is not in the vocabulary")
        weights[idx] = tf * vocab.idf(idx)
    weights = dict(sorted(weights.items()))
    sq = 0.0
    for w in weights.values():
        sq += w * w
    return WorksheetVector(weights, sheet_name, frozenset(keywords), vocab.fingerprint, sq)
