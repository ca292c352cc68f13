import os
import random

import pytest

from sheetgroups.grid import CellValue, Workbook, load_canonical, save_canonical
from sheetgroups.ingest import (
    CorpusError,
    convert_file,
    grid_name,
    list_corpus,
    scan_corpus,
)
from xlsx_util import SAMPLE, write_xlsx


@pytest.fixture
def sample(tmp_path):
    p = tmp_path / "Jun00_FOM_Req.xlsx"
    write_xlsx(p, SAMPLE, cached={"E10*30": "72330", "E11*30": "72360"})
    return p


def test_convert_xlsx_cells(sample):
    wb = convert_file(sample)
    assert wb.filename == "Jun00_FOM_Req.xlsx"
    assert [s.name for s in wb.sheets] == ["FOM Jun Storage", "Dates", "Sheet3"]
    st = wb.sheet("FOM Jun Storage")
    assert st.get(4, 2) == CellValue("text", "Pipe/Service")
    assert st.get(9, 4) == CellValue("number", "2411", 2411)
    assert st.get(9, 3) == CellValue("formula", "72330", 72330, "=E10*30")
    dates = wb.sheet("Dates")
    assert dates.get(1, 0).kind == "date"
    assert dates.get(1, 0).numeric == 36678
    assert dates.get(1, 1) == CellValue("boolean", "TRUE", 1)
    assert dates.get(1, 2) == CellValue("error", "#N/A")
    assert wb.sheet("Sheet3").cells == {}


def test_formula_without_cache(tmp_path):
    p = tmp_path / "f.xlsx"
    write_xlsx(p, {"S": {"A1": 1, "B1": "=A1+1"}})
    assert convert_file(p).sheet("S").get(0, 1) == CellValue("formula", "", None, "=A1+1")


def test_conversion_is_deterministic(sample):
    assert save_canonical(convert_file(sample)) == save_canonical(convert_file(sample))


def test_grid_json_passthrough(tmp_path, sample):
    wb = convert_file(sample)
    g = tmp_path / grid_name(sample)
    g.write_bytes(save_canonical(wb))
    assert convert_file(g) == wb


def test_grid_name():
    assert grid_name("a/book.xlsx") == "book.grid.json"
    assert grid_name("book.grid.json") == "book.grid.json"


def _corrupt_corpus(root, sample_bytes):
    (root / "good1.xlsx").write_bytes(sample_bytes)
    (root / "good2.xlsx").write_bytes(sample_bytes[:])
    (root / "truncated.xlsx").write_bytes(sample_bytes[: len(sample_bytes) // 2])
    (root / "garbage.xlsx").write_bytes(os.urandom(2048))
    (root / "empty.xlsx").write_bytes(b"")
    (root / "notes.txt").write_text("hello")
    (root / "legacy.xls").write_bytes(b"\xd0\xcf\x11\xe0")
    (root / "bad.grid.json").write_text('{"filename": "x", "sheets": [')
    (root / "dup.grid.json").write_text('{"filename":"x","sheets":[{"name":"A","cells":[]},{"name":"A","cells":[]}]}')


def test_corrupt_corpus_exact_skips(tmp_path, sample):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    _corrupt_corpus(corpus, sample.read_bytes())
    wbs, rep = scan_corpus(corpus)
    assert rep.total == 9
    assert rep.converted == 2 == len(wbs)
    reasons = {os.path.basename(p): r for p, r in rep.skipped}
    assert reasons == {
        "bad.grid.json": "parse failure",
        "dup.grid.json": "validation error",
        "empty.xlsx": "parse failure",
        "garbage.xlsx": "parse failure",
        "legacy.xls": "unsupported extension",
        "notes.txt": "unsupported extension",
        "truncated.xlsx": "parse failure",
    }


def test_recursive_listing_order(tmp_path):
    (tmp_path / "b").mkdir()
    (tmp_path / "a.xlsx").write_bytes(b"")
    (tmp_path / "b" / "c.xlsx").write_bytes(b"")
    (tmp_path / "B.xlsx").write_bytes(b"")
    flat = [os.path.relpath(p, tmp_path) for p in list_corpus(tmp_path)]
    deep = [os.path.relpath(p, tmp_path) for p in list_corpus(tmp_path, recursive=True)]
    assert flat == ["B.xlsx", "a.xlsx"]
    assert deep == ["B.xlsx", "a.xlsx", os.path.join("b", "c.xlsx")]


def test_missing_corpus(tmp_path):
    with pytest.raises(CorpusError):
        list_corpus(tmp_path / "nope")


def test_parallel_scan_matches_serial(tmp_path, sample):
    rng = random.Random(4)
    for k in range(12):
        write_xlsx(tmp_path / f"w{k:02d}.xlsx", {"S": {"A1": "Name", "B1": "Qty", "A2": f"item{rng.randint(0, 9)}", "B2": k}})
    serial, r1 = scan_corpus(tmp_path, jobs=1)
    par, r2 = scan_corpus(tmp_path, jobs=4)
    assert [save_canonical(w) for w in serial] == [save_canonical(w) for w in par]
    assert r1.to_dict() == r2.to_dict()


def test_empty_workbook_round_trip():
    wb = Workbook.build("e.xlsx", [])
    assert load_canonical(save_canonical(wb)) == wb
