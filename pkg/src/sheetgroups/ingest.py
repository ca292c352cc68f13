"""Corpus ingestion: .xlsx and .grid.json files into canonical workbooks."""

from __future__ import annotations

import datetime as dt
import io
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import openpyxl
from openpyxl.utils.datetime import to_excel

from .grid import (
    ERROR_LITERALS,
    CellValue,
    GridParseError,
    GridValidationError,
    Workbook,
    Worksheet,
    format_number,
    load_canonical,
    save_canonical,
)
from .parallel import pmap

log = logging.getLogger(__name__)

GRID_SUFFIX = ".grid.json"
SUPPORTED = (".xlsx", GRID_SUFFIX)


class IngestError(Exception):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail


class CorpusError(OSError):
    """The corpus directory itself cannot be read."""


@dataclass
class IngestReport:
    converted: int = 0
    skipped: list = field(default_factory=list)  # (path, reason)
    total: int = 0

    def to_dict(self) -> dict:
        return {
            "converted": self.converted,
            "skipped": [{"path": p, "reason": r} for p, r in self.skipped],
            "total": self.total,
        }


def is_supported(path) -> bool:
    name = str(path).lower()
    return name.endswith(SUPPORTED)


def grid_name(path) -> str:
    """``book.xlsx`` -> ``book.grid.json``."""
    name = Path(path).name
    if name.lower().endswith(GRID_SUFFIX):
        return name
    return Path(name).stem + GRID_SUFFIX


def _plain_value(value, data_type, epoch) -> CellValue | None:
    """Classify a non-formula value; None for blank."""
    if value is None:
        return None
    if isinstance(value, bool):
        return CellValue("boolean", "TRUE" if value else "FALSE", int(value))
    if isinstance(value, (dt.datetime, dt.date, dt.time)):
        return CellValue("date", value.isoformat(), to_excel(value, epoch))
    if isinstance(value, dt.timedelta):
        return CellValue("number", str(value), to_excel(value, epoch))
    if isinstance(value, (int, float)):
        return CellValue("number", format_number(value), value)
    text = str(value)
    if not text.strip():
        return None
    if data_type == "e" or text in ERROR_LITERALS:
        return CellValue("error", text)
    return CellValue("text", text)


def _formula_cell(src, cached, epoch) -> CellValue:
    src = getattr(src, "text", src)  # ArrayFormula carries its source in .text
    src = str(src)
    if cached is None or (isinstance(cached, str) and not cached.strip()):
        return CellValue("formula", "", None, src)
    if isinstance(cached, bool):
        return CellValue("formula", "TRUE" if cached else "FALSE", int(cached), src)
    if isinstance(cached, (dt.datetime, dt.date, dt.time)):
        return CellValue("formula", cached.isoformat(), to_excel(cached, epoch), src)
    if isinstance(cached, dt.timedelta):
        return CellValue("formula", str(cached), to_excel(cached, epoch), src)
    if isinstance(cached, (int, float)):
        return CellValue("formula", format_number(cached), cached, src)
    return CellValue("formula", str(cached), None, src)


def _sheet_cells(ws_formula, ws_value, epoch) -> dict:
    if not hasattr(ws_formula, "iter_rows"):
        return {}  # chartsheet: no cells, but the name still counts
    ws_formula.reset_dimensions()
    ws_value.reset_dimensions()
    cached = {}
    for row in ws_value.iter_rows():
        for cell in row:
            if cell.value is not None:
                cached[(cell.row - 1, cell.column - 1)] = cell.value
    cells = {}
    for row in ws_formula.iter_rows():
        for cell in row:
            if cell.value is None:
                continue
            rc = (cell.row - 1, cell.column - 1)
            if cell.data_type == "f":
                cells[rc] = _formula_cell(cell.value, cached.get(rc), epoch)
            else:
                v = _plain_value(cell.value, cell.data_type, epoch)
                if v is not None:
                    cells[rc] = v
    return cells


def convert_xlsx(path) -> Workbook:
    path = Path(path)
    data = path.read_bytes()
    # openpyxl raises a wide variety of exceptions on damaged archives and
    # XML; all of them mean the same thing here.
    try:
        wb_f = openpyxl.load_workbook(io.BytesIO(data), read_only=True, data_only=False)
        wb_v = openpyxl.load_workbook(io.BytesIO(data), read_only=True, data_only=True)
        try:
            sheets = [
                Worksheet(name, _sheet_cells(wb_f[name], wb_v[name], wb_f.epoch))
                for name in wb_f.sheetnames
            ]
        finally:
            wb_f.close()
            wb_v.close()
    except Exception as e:
        raise IngestError("parse failure", f"{type(e).__name__}: {e}") from None
    return Workbook.build(path.name, sheets)


def convert_file(path) -> Workbook:
    """Load one corpus file; raises IngestError with a short reason on failure."""
    path = Path(path)
    if not is_supported(path):
        raise IngestError("unsupported extension")
    if path.name.lower().endswith(GRID_SUFFIX):
        try:
            return load_canonical(path.read_bytes())
        except GridParseError as e:
            raise IngestError("parse failure", str(e)) from None
        except GridValidationError as e:
            raise IngestError("validation error", str(e)) from None
    return convert_xlsx(path)


def _try_convert(path: str):
    try:
        return convert_file(path), None
    except IngestError as e:
        return None, e
    except OSError as e:
        return None, IngestError("read error", str(e))


def list_corpus(root, recursive: bool = False) -> list[str]:
    """Regular files under ``root`` in lexicographic order of relative path."""
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"not a readable directory: {root}")
    try:
        if recursive:
            found = []
            for dirpath, dirnames, filenames in os.walk(root, onerror=_raise):
                found.extend(Path(dirpath) / f for f in filenames)
        else:
            found = [p for p in root.iterdir() if p.is_file()]
    except OSError as e:
        raise CorpusError(str(e)) from e
    return sorted((str(p) for p in found), key=lambda p: Path(p).relative_to(root).as_posix())


def _raise(err):
    raise err


def convert_corpus(root, recursive: bool = False, jobs: int = 1) -> tuple[list[tuple[str, Workbook]], IngestReport]:
    """Like scan_corpus, but keeps each workbook's source path."""
    paths = list_corpus(root, recursive)
    results = pmap(_try_convert, paths, jobs)
    report = IngestReport(total=len(paths))
    converted = []
    for path, (wb, err) in zip(paths, results):
        if wb is None:
            log.warning("skipping %s: %s", path, err)
            report.skipped.append((path, err.reason))
        else:
            converted.append((path, wb))
            report.converted += 1
    return converted, report


def scan_corpus(root, recursive: bool = False, jobs: int = 1) -> tuple[list[Workbook], IngestReport]:
    """Convert every file; failures become skip records, never exceptions."""
    converted, report = convert_corpus(root, recursive, jobs)
    return [wb for _, wb in converted], report


def write_grid(wb: Workbook, path) -> None:
    Path(path).write_bytes(save_canonical(wb))
