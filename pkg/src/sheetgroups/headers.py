"""Table segmentation and header extraction.

A worksheet is cut into rectangular tables along fences (fully blank rows or
columns). Each table's top row is a row-header candidate and its leftmost
column a column-header candidate. Candidates are filtered by three rules:

1. a header row must fill the entire table width with text;
2. a header row/column must not be a numeric or date sequence;
3. a header must not sit right of (below) a numeric or date sequence.

Rule 3 looks across fences, but only into a neighbouring region with the same
row span (column span). That keeps a table split by an inserted blank column
together while treating a table across a blank row as unrelated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .grid import CellValue, Worksheet, a1, used_range

NON_TEXT = frozenset(["number", "date", "boolean", "error"])


@dataclass(frozen=True, order=True)
class TableRegion:
    """Inclusive 0-based bounds."""

    top: int
    left: int
    bottom: int
    right: int

    def __post_init__(self):
        if self.top > self.bottom or self.left > self.right:
            raise ValueError(f"empty region {self!r}")

    def contains(self, r: int, c: int) -> bool:
        return self.top <= r <= self.bottom and self.left <= c <= self.right

    def a1(self) -> str:
        return f"{a1(self.top, self.left)}:{a1(self.bottom, self.right)}"


@dataclass
class RawHeaderSet:
    # (region, col, text) for cells of a region's top row
    row_headers: list = field(default_factory=list)
    # (region, row, text) for cells of a region's left column
    col_headers: list = field(default_factory=list)

    def texts(self) -> list[str]:
        return [t for _, _, t in self.row_headers] + [t for _, _, t in self.col_headers]


def find_fences(ws: Worksheet, region: TableRegion | None = None) -> tuple[set[int], set[int]]:
    """Return (blank_rows, blank_cols) inside ``region`` (default: the used range)."""
    if region is None:
        n_rows, n_cols = used_range(ws)
        if n_rows == 0:
            return set(), set()
        region = TableRegion(0, 0, n_rows - 1, n_cols - 1)
    rows = set(range(region.top, region.bottom + 1))
    cols = set(range(region.left, region.right + 1))
    for r, c in ws.cells:
        if region.contains(r, c):
            rows.discard(r)
            cols.discard(c)
    return rows, cols


def _runs(indices: Sequence[int]) -> list[tuple[int, int]]:
    """Group sorted indices into maximal runs of consecutive values."""
    runs = []
    for i in indices:
        if runs and i == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], i)
        else:
            runs.append((i, i))
    return runs


def _tight(coords) -> TableRegion:
    rows = [r for r, _ in coords]
    cols = [c for _, c in coords]
    return TableRegion(min(rows), min(cols), max(rows), max(cols))


def _partition(coords, runs, axis):
    run_of = {}
    for k, (lo, hi) in enumerate(runs):
        for i in range(lo, hi + 1):
            run_of[i] = k
    pieces = [[] for _ in runs]
    for rc in coords:
        pieces[run_of[rc[axis]]].append(rc)
    return pieces


def _split(coords: list[tuple[int, int]]) -> list[TableRegion]:
    row_runs = _runs(sorted({r for r, _ in coords}))
    if len(row_runs) > 1:
        pieces = _partition(coords, row_runs, 0)
    else:
        col_runs = _runs(sorted({c for _, c in coords}))
        if len(col_runs) == 1:
            return [_tight(coords)]
        pieces = _partition(coords, col_runs, 1)
    out = []
    for piece in pieces:
        out.extend(_split(piece))
    return out


def segment_tables(ws: Worksheet) -> list[TableRegion]:
    """Recursively split the used range at fences until no region has an internal fence."""
    coords = list(ws.cells)
    if not coords:
        return []
    return sorted(_split(coords), key=lambda t: (t.top, t.left))


def _is_seq_kind(cell: CellValue | None) -> bool:
    return cell is not None and cell.effective_kind in ("number", "date")


def is_numeric_or_date_sequence(cells: Sequence[CellValue | None]) -> bool:
    filled = [c for c in cells if c is not None]
    return len(filled) >= 2 and all(_is_seq_kind(c) for c in filled)


def _is_text(cell: CellValue | None) -> bool:
    return cell is not None and cell.effective_kind not in NON_TEXT


def _owner(regions, r: int, c: int) -> TableRegion | None:
    for reg in regions:
        if reg.contains(r, c):
            return reg
    return None


def _left_is_sequence(ws, regions, region, rows: range) -> bool:
    for c in range(region.left - 1, -1, -1):
        line = [ws.get(r, c) for r in rows]
        if all(x is None for x in line):
            continue
        hit = next(r for r, x in zip(rows, line) if x is not None)
        owner = _owner(regions, hit, c)
        if owner is None or (owner.top, owner.bottom) != (region.top, region.bottom):
            return False
        return is_numeric_or_date_sequence(line)
    return False


def _above_is_sequence(ws, regions, region, cols: range) -> bool:
    for r in range(region.top - 1, -1, -1):
        line = [ws.get(r, c) for c in cols]
        if all(x is None for x in line):
            continue
        hit = next(c for c, x in zip(cols, line) if x is not None)
        owner = _owner(regions, r, hit)
        if owner is None or (owner.left, owner.right) != (region.left, region.right):
            return False
        return is_numeric_or_date_sequence(line)
    return False


def extract_headers(ws: Worksheet, regions: Sequence[TableRegion] | None = None) -> RawHeaderSet:
    """Apply the three noise heuristics to every region and collect accepted headers.

    When a region's top row is accepted, its top-left cell belongs to the row
    headers and the column candidate starts one row lower.
    """
    if regions is None:
        regions = segment_tables(ws)
    out = RawHeaderSet()
    for reg in regions:
        cols = range(reg.left, reg.right + 1)
        top = [ws.get(reg.top, c) for c in cols]
        row_ok = (
            all(_is_text(x) for x in top)
            and not is_numeric_or_date_sequence(top)
            and not _above_is_sequence(ws, regions, reg, cols)
        )
        if row_ok:
            out.row_headers.extend((reg, c, x.text) for c, x in zip(cols, top))

        rows = range(reg.top + 1 if row_ok else reg.top, reg.bottom + 1)
        left = [ws.get(r, reg.left) for r in rows]
        filled = [x for x in left if x is not None]
        col_ok = (
            bool(filled)
            and all(_is_text(x) for x in filled)
            and not is_numeric_or_date_sequence(left)
            and not _left_is_sequence(ws, regions, reg, rows)
        )
        if col_ok:
            out.col_headers.extend((reg, r, x.text) for r, x in zip(rows, left) if x is not None)
    return out


def dump_regions(ws: Worksheet) -> list[str]:
    """Debug lines: sheet, range, accepted row headers, accepted column headers."""
    regions = segment_tables(ws)
    hs = extract_headers(ws, regions)
    lines = []
    for reg in regions:
        rh = [t for g, _, t in hs.row_headers if g == reg]
        ch = [t for g, _, t in hs.col_headers if g == reg]
        lines.append(f"{ws.name}\t{reg.a1()}\trowHeaders={'|'.join(rh)}\tcolHeaders={'|'.join(ch)}")
    return lines
