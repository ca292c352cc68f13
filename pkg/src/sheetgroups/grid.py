"""Canonical cell-grid model and its JSON interchange format.

Everything downstream of ingestion works on these types, never on a
spreadsheet file format directly. Blank cells are absent from the grid.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

KINDS = ("text", "number", "date", "boolean", "formula", "error")

ERROR_LITERALS = frozenset(
    ["#NAME?", "#REF!", "#VALUE!", "#DIV/0!", "#N/A", "#NUM!", "#NULL!"]
)


class GridError(ValueError):
    """Base class for canonical-format problems."""


class GridParseError(GridError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"{msg} (at byte {offset})")
        self.offset = offset


class GridValidationError(GridError):
    pass


@dataclass(frozen=True)
class CellValue:
    kind: str
    text: str
    numeric: float | int | None = None
    formula_src: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GridValidationError(f"unknown cell kind {self.kind!r}")
        if self.kind == "text" and not self.text.strip():
            raise GridValidationError("text cell must have non-blank text")
        if self.kind in ("number", "date", "boolean") and self.numeric is None:
            raise GridValidationError(f"{self.kind} cell requires a numeric value")
        if self.numeric is not None:
            if isinstance(self.numeric, bool) or not isinstance(self.numeric, (int, float)):
                raise GridValidationError(f"numeric value must be a number, got {self.numeric!r}")
            if isinstance(self.numeric, float) and not math.isfinite(self.numeric):
                raise GridValidationError("numeric value must be finite")
        if (self.formula_src is not None) != (self.kind == "formula"):
            raise GridValidationError("formula source present iff kind is formula")

    @property
    def effective_kind(self) -> str:
        """Kind as seen by header extraction: formulas take their cached value's kind."""
        if self.kind != "formula":
            return self.kind
        if self.numeric is not None:
            return "number"
        if self.text.strip() in ERROR_LITERALS:
            return "error"
        return "text"


def text_cell(text: str) -> CellValue:
    return CellValue("text", text)


def number_cell(value: float | int, text: str | None = None) -> CellValue:
    return CellValue("number", format_number(value) if text is None else text, value)


def format_number(value: float | int) -> str:
    if isinstance(value, float) and value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value) if isinstance(value, float) else str(value)


def _check_coord(rc) -> tuple[int, int]:
    r, c = rc
    if not isinstance(r, int) or not isinstance(c, int) or r < 0 or c < 0:
        raise GridValidationError(f"bad cell coordinate {rc!r}")
    return r, c


@dataclass(frozen=True)
class Worksheet:
    """A named sparse grid. ``cells`` maps 0-based (row, col) to CellValue."""

    name: str
    cells: Mapping[tuple[int, int], CellValue] = field(default_factory=dict)

    def __post_init__(self):
        cells = {}
        for rc, cell in self.cells.items():
            if not isinstance(cell, CellValue):
                raise GridValidationError(f"sheet {self.name!r}: cell {rc!r} is not a CellValue")
            cells[_check_coord(rc)] = cell
        # Stored sorted so iteration order never depends on construction order.
        object.__setattr__(self, "cells", dict(sorted(cells.items())))

    @property
    def n_rows(self) -> int:
        return used_range(self)[0]

    @property
    def n_cols(self) -> int:
        return used_range(self)[1]

    def get(self, r: int, c: int) -> CellValue | None:
        return self.cells.get((r, c))

    def __eq__(self, other):
        if not isinstance(other, Worksheet):
            return NotImplemented
        return self.name == other.name and self.cells == other.cells

    def __hash__(self):
        return hash((self.name, tuple(self.cells.items())))


def used_range(ws: Worksheet) -> tuple[int, int]:
    """Tight (n_rows, n_cols) extent; (0, 0) for an empty sheet."""
    if not ws.cells:
        return 0, 0
    return (max(r for r, _ in ws.cells) + 1, max(c for _, c in ws.cells) + 1)


@dataclass(frozen=True)
class Workbook:
    id: str
    filename: str
    sheets: tuple[Worksheet, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sheets", tuple(self.sheets))
        seen = set()
        for ws in self.sheets:
            if ws.name in seen:
                raise GridValidationError(f"duplicate sheet name {ws.name!r}")
            seen.add(ws.name)

    @classmethod
    def build(cls, filename: str, sheets: Iterable[Worksheet]) -> "Workbook":
        """Construct with the content-derived id filled in."""
        sheets = tuple(sheets)
        return cls(compute_id(filename, sheets), filename, sheets)

    def sheet(self, name: str) -> Worksheet:
        for ws in self.sheets:
            if ws.name == name:
                return ws
        raise KeyError(name)


def _cell_record(r: int, c: int, cell: CellValue) -> dict:
    rec = {"r": r, "c": c, "kind": cell.kind, "text": cell.text}
    if cell.numeric is not None:
        rec["num"] = cell.numeric
    if cell.formula_src is not None:
        rec["formula"] = cell.formula_src
    return rec


def _sheet_records(sheets) -> list:
    return [
        {"name": ws.name, "cells": [_cell_record(r, c, v) for (r, c), v in sorted(ws.cells.items())]}
        for ws in sheets
    ]


def _dumps(obj) -> bytes:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), allow_nan=False).encode("utf-8")


def compute_id(filename: str, sheets: Iterable[Worksheet]) -> str:
    # Filename is part of the hash so byte-identical copies under different
    # names remain distinct workbooks.
    body = _dumps({"filename": filename, "sheets": _sheet_records(sheets)})
    return hashlib.sha256(body).hexdigest()[:16]


def save_canonical(wb: Workbook) -> bytes:
    return _dumps({"id": wb.id, "filename": wb.filename, "sheets": _sheet_records(wb.sheets)})


def _parse_cell(sheet_name: str, rec) -> tuple[tuple[int, int], CellValue]:
    where = f"sheet {sheet_name!r}"
    if not isinstance(rec, dict):
        raise GridValidationError(f"{where}: cell record must be an object")
    try:
        r, c, kind, text = rec["r"], rec["c"], rec["kind"], rec["text"]
    except KeyError as e:
        raise GridValidationError(f"{where}: cell record missing {e.args[0]!r}") from None
    if isinstance(r, bool) or isinstance(c, bool):
        raise GridValidationError(f"{where}: bad cell coordinate ({r!r}, {c!r})")
    if not isinstance(text, str):
        raise GridValidationError(f"{where}: cell ({r}, {c}) text must be a string")
    try:
        return _check_coord((r, c)), CellValue(kind, text, rec.get("num"), rec.get("formula"))
    except GridValidationError as e:
        raise GridValidationError(f"{where}: cell ({r}, {c}): {e}") from None


def load_canonical(data: bytes) -> Workbook:
    """Parse and validate a ``.grid.json`` document.

    An empty or missing ``id`` is filled in; a present id must match the content.
    """
    try:
        obj = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise GridParseError("invalid UTF-8", e.start) from None
    except json.JSONDecodeError as e:
        # JSONDecodeError.pos is a character index; report bytes.
        offset = len(data.decode("utf-8")[: e.pos].encode("utf-8"))
        raise GridParseError(e.msg, offset) from None

    if not isinstance(obj, dict) or not isinstance(obj.get("sheets"), list):
        raise GridValidationError("workbook must be an object with a 'sheets' list")
    filename = obj.get("filename", "")
    if not isinstance(filename, str):
        raise GridValidationError("filename must be a string")

    sheets = []
    names = set()
    for srec in obj["sheets"]:
        if not isinstance(srec, dict) or not isinstance(srec.get("name"), str):
            raise GridValidationError("sheet record must have a string 'name'")
        name = srec["name"]
        if name in names:
            raise GridValidationError(f"duplicate sheet name {name!r}")
        names.add(name)
        cells = {}
        for crec in srec.get("cells", []):
            rc, cell = _parse_cell(name, crec)
            if rc in cells:
                raise GridValidationError(f"sheet {name!r}: duplicate cell {rc}")
            cells[rc] = cell
        sheets.append(Worksheet(name, cells))

    wid = compute_id(filename, sheets)
    stated = obj.get("id") or ""
    if stated and stated != wid:
        raise GridValidationError(f"id {stated!r} does not match content hash {wid!r}")
    return Workbook(wid, filename, tuple(sheets))


def col_letter(c: int) -> str:
    s = ""
    c += 1
    while c:
        c, rem = divmod(c - 1, 26)
        s = chr(65 + rem) + s
    return s


def a1(r: int, c: int) -> str:
    return f"{col_letter(c)}{r + 1}"
