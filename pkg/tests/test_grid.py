import json
import random

import pytest
from hypothesis import given, settings

from corpora import units_sheet
from sheetgroups.grid import (
    CellValue,
    GridParseError,
    GridValidationError,
    Workbook,
    Worksheet,
    a1,
    compute_id,
    load_canonical,
    save_canonical,
    used_range,
)
from strategies import workbooks


def test_load_minimal():
    raw = b'{"filename":"a.xlsx","sheets":[{"name":"S","cells":[{"r":0,"c":0,"kind":"text","text":"hi"}]}]}'
    wb = load_canonical(raw)
    assert len(wb.sheets) == 1
    assert wb.sheets[0].cells == {(0, 0): CellValue("text", "hi")}


def test_round_trip_bytes_identical():
    wb = Workbook.build("x.xlsx", [units_sheet(), Worksheet("Empty")])
    b = save_canonical(wb)
    assert save_canonical(load_canonical(b)) == b


def test_duplicate_sheet_names_rejected():
    raw = b'{"filename":"a","sheets":[{"name":"Q1","cells":[]},{"name":"Q1","cells":[]}]}'
    with pytest.raises(GridValidationError, match="Q1"):
        load_canonical(raw)


def test_out_of_range_cell_names_sheet():
    raw = b'{"filename":"a","sheets":[{"name":"Q1","cells":[{"r":-1,"c":0,"kind":"text","text":"x"}]}]}'
    with pytest.raises(GridValidationError, match="Q1"):
        load_canonical(raw)


def test_parse_error_reports_byte_offset():
    raw = '{"filename":"é","sheets":[,]}'.encode()
    with pytest.raises(GridParseError) as ei:
        load_canonical(raw)
    assert ei.value.offset == raw.index(b",]")


def test_id_mismatch_rejected():
    wb = Workbook.build("x", [units_sheet()])
    obj = json.loads(save_canonical(wb))
    obj["id"] = "0" * 16
    with pytest.raises(GridValidationError, match="content hash"):
        load_canonical(json.dumps(obj).encode())


@pytest.mark.parametrize("cell", [
    {"kind": "text", "text": "  "},
    {"kind": "number", "text": "1"},
    {"kind": "bogus", "text": "x"},
    {"kind": "text", "text": "x", "formula": "=A1"},
    {"kind": "number", "text": "x", "num": True},
])
def test_cell_invariants(cell):
    raw = json.dumps({"filename": "a", "sheets": [{"name": "S", "cells": [{"r": 0, "c": 0, **cell}]}]})
    with pytest.raises(GridValidationError):
        load_canonical(raw.encode())


def test_empty_workbook_layout():
    wb = Workbook.build("e.xlsx", [])
    out = save_canonical(wb)
    assert out == ('{"id":"%s","filename":"e.xlsx","sheets":[]}' % wb.id).encode()


def test_save_deterministic_and_id_content_derived():
    wb = Workbook.build("x.xlsx", [units_sheet()])
    assert save_canonical(wb) == save_canonical(wb)
    obj = json.loads(save_canonical(wb))
    sheets = load_canonical(save_canonical(wb)).sheets
    assert compute_id(obj["filename"], sheets) == wb.id == obj["id"]


def test_insertion_order_does_not_matter():
    ws = units_sheet()
    items = list(ws.cells.items())
    random.Random(3).shuffle(items)
    shuffled = Worksheet(ws.name, dict(items))
    a = Workbook.build("f", [ws])
    b = Workbook.build("f", [shuffled])
    assert a.id == b.id
    assert save_canonical(a) == save_canonical(b)


def test_filename_is_part_of_id():
    assert Workbook.build("a.xlsx", [units_sheet()]).id != Workbook.build("b.xlsx", [units_sheet()]).id


def test_used_range():
    assert used_range(Worksheet("e")) == (0, 0)
    assert used_range(Worksheet("s", {(4, 2): CellValue("text", "x")})) == (5, 3)
    assert used_range(units_sheet()) == (9, 5)


def test_effective_kind_of_formulas():
    assert CellValue("formula", "6", 6, "=B1*2").effective_kind == "number"
    assert CellValue("formula", "#REF!", None, "=X").effective_kind == "error"
    assert CellValue("formula", "", None, "=X").effective_kind == "text"


def test_a1():
    assert a1(0, 0) == "A1"
    assert a1(8, 4) == "E9"
    assert a1(0, 26) == "AA1"


@settings(max_examples=150, deadline=None)
@given(workbooks())
def test_round_trip_property(wb):
    b = save_canonical(wb)
    back = load_canonical(b)
    assert back == wb
    assert save_canonical(back) == b
