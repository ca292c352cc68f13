"""Header-term and worksheet-name normalization."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .porter import porter_stem

MONTHS = frozenset(
    """january february march april may june july august september october november december
    jan feb mar apr jun jul aug sep sept oct nov dec""".split()
)

_DATE_RE = re.compile(r"\d{1,4}[-/.]\d{1,2}([-/.]\d{1,4})?")
_DEFAULT_SHEET_RE = re.compile(r"sheet\d+(\(\d+\))?", re.IGNORECASE)
_SPLIT_RE = re.compile(r"[^a-z0-9]+")
_ALPHA_RE = re.compile(r"[a-z]+")


def _read_words(text: str) -> list[str]:
    return [w.strip() for w in text.splitlines() if w.strip()]


def _bundled(name: str) -> list[str]:
    return _read_words(resources.files("sheetgroups.data").joinpath(name).read_text("utf-8"))


def load_word_file(path) -> list[str]:
    return _read_words(Path(path).read_text("utf-8"))


def _is_url(tok: str) -> bool:
    return "://" in tok or tok.startswith("www.")


def _is_mail(tok: str) -> bool:
    if tok.count("@") != 1:
        return False
    return "." in tok.split("@", 1)[1]


def is_default_sheet_name(name: str) -> bool:
    """``Sheet<digits>`` optionally followed by ``(<digits>)``, any case."""
    return _DEFAULT_SHEET_RE.fullmatch(name.strip()) is not None


@dataclass(frozen=True)
class TextNormalizer:
    stopwords: frozenset
    artifact_words: frozenset  # alphanumeric tokens such as "sheet"
    artifact_literals: tuple  # error literals such as "#REF!", removed as substrings

    @classmethod
    def default(cls, stopwords_file=None, artifact_words_file=None) -> "TextNormalizer":
        """Bundled lists; a stop-word file replaces the default, an artifact file extends it."""
        stop = load_word_file(stopwords_file) if stopwords_file else _bundled("stopwords.txt")
        art = _bundled("artifact_words.txt")
        if artifact_words_file:
            art += load_word_file(artifact_words_file)
        words = {w.lower() for w in art if w.isalnum()}
        literals = sorted({w.lower() for w in art if not w.isalnum()}, key=lambda s: (-len(s), s))
        return cls(frozenset(w.lower() for w in stop), frozenset(words), tuple(literals))

    def tokens(self, raw: str) -> list[str]:
        """Lowercased alphabetic tokens with every removal rule applied, unstemmed."""
        text = unicodedata.normalize("NFKD", raw).encode("ascii", "ignore").decode("ascii").lower()
        for lit in self.artifact_literals:
            text = text.replace(lit, " ")
        out = []
        for chunk in text.split():
            if _is_url(chunk) or _is_mail(chunk) or _DATE_RE.fullmatch(chunk):
                continue
            for piece in _SPLIT_RE.split(chunk):
                # Pure numbers vanish here; mixed tokens like "fy2000" keep "fy".
                for tok in _ALPHA_RE.findall(piece):
                    if tok in self.stopwords or tok in MONTHS or tok in self.artifact_words:
                        continue
                    out.append(tok)
        return out

    def normalize_header(self, raw: str) -> str | None:
        """One composite vocabulary term per header cell, or None if nothing survives."""
        toks = [porter_stem(t) for t in self.tokens(raw)]
        return " ".join(toks) if toks else None

    def sheet_keywords(self, name: str) -> frozenset:
        return frozenset(porter_stem(t) for t in self.tokens(name))


_DEFAULT = None


def default_normalizer() -> TextNormalizer:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = TextNormalizer.default()
    return _DEFAULT


def normalize_header(raw: str) -> str | None:
    return default_normalizer().normalize_header(raw)


def sheet_keywords(name: str) -> frozenset:
    return default_normalizer().sheet_keywords(name)
