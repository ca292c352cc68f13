from hypothesis import strategies as st

from sheetgroups.grid import CellValue, Workbook, Worksheet

_text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=12).filter(
    lambda s: s.strip())
_num = st.one_of(st.integers(-10**9, 10**9), st.floats(allow_nan=False, allow_infinity=False, width=64))

cell_values = st.one_of(
    _text.map(lambda t: CellValue("text", t)),
    _num.map(lambda v: CellValue("number", str(v), v)),
    st.tuples(st.dates(), st.integers(1, 80000)).map(lambda p: CellValue("date", p[0].isoformat(), p[1])),
    st.booleans().map(lambda b: CellValue("boolean", "TRUE" if b else "FALSE", int(b))),
    st.tuples(_text, st.one_of(st.none(), _num)).map(
        lambda p: CellValue("formula", "" if p[1] is None else str(p[1]), p[1], "=" + p[0])),
    st.sampled_from(["#REF!", "#N/A", "#DIV/0!"]).map(lambda t: CellValue("error", t)),
)

coords = st.tuples(st.integers(0, 30), st.integers(0, 12))


@st.composite
def worksheets(draw, name=None):
    cells = draw(st.dictionaries(coords, cell_values, max_size=25))
    return Worksheet(name if name is not None else draw(_text), cells)


@st.composite
def workbooks(draw):
    names = draw(st.lists(_text, max_size=4, unique=True))
    sheets = [draw(worksheets(name=n)) for n in names]
    return Workbook.build(draw(_text), sheets)


# Small grids where fences and sequences actually occur.
small_cells = st.one_of(
    st.sampled_from(["Region", "Total", "Name", "Pipe/Service", "Units"]).map(lambda t: CellValue("text", t)),
    st.integers(0, 99).map(lambda v: CellValue("number", str(v), v)),
)


@st.composite
def small_sheets(draw):
    cells = draw(st.dictionaries(st.tuples(st.integers(0, 7), st.integers(0, 6)), small_cells, max_size=30))
    return Worksheet("s", cells)
