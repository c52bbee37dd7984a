"""Canonical table model: typed cells, orientation handling, aggregate rows."""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import NonReplaceableError, TableStructureError
from .lexicons import load_header_lexicon
from .text import norm_text, norm_tokens

TEXT, NUMBER, DATE, EMPTY = "text", "number", "date", "empty"
VERTICAL, FLIPPED = "vertical", "flipped_from_horizontal"

AGGREGATE_LABELS = frozenset({"total", "totals", "sum", "overall", "all", "combined"})
AGGREGATE_REL_TOL = 1e-9

_EMPTY_MARKERS = frozenset({"", "-", "–", "—", "n/a"})
_UNITS = frozenset(
    "% km m cm mm kg g t lb lbs mi ft in yd yds s sec secs min mins h hr hrs "
    "mph kph km/h kmh mw kw gw pts k bn mn million billion thousand".split()
)
_NUMBER_RE = re.compile(
    r"^(?P<sign>[-+−])?[$€£¥]?(?P<num>(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?|\.\d+)"
    r"\s*(?P<unit>[^\d\s]\S*)?$"
)

MONTHS = (
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december",
)
MONTH_LOOKUP = {name: i + 1 for i, name in enumerate(MONTHS)}
MONTH_LOOKUP.update({name[:3]: i + 1 for i, name in enumerate(MONTHS)})
MONTH_LOOKUP["sept"] = 9

_MONTH_ALT = "|".join(sorted(MONTH_LOOKUP, key=len, reverse=True))
_DATE_PATTERNS = (
    # January 20, 2009 / Jan. 20 2009
    re.compile(rf"^(?P<month>{_MONTH_ALT})\.?\s+(?P<day>\d{{1,2}})(?:st|nd|rd|th)?,?\s+(?P<year>\d{{3,4}})$", re.I),
    # 20 January 2009
    re.compile(rf"^(?P<day>\d{{1,2}})(?:st|nd|rd|th)?\s+(?P<month>{_MONTH_ALT})\.?,?\s+(?P<year>\d{{3,4}})$", re.I),
    # January 2009
    re.compile(rf"^(?P<month>{_MONTH_ALT})\.?,?\s+(?P<year>\d{{3,4}})$", re.I),
    # 2009-01-20
    re.compile(r"^(?P<year>\d{4})-(?P<month>\d{1,2})-(?P<day>\d{1,2})$"),
)

DEFAULT_HEADER_LEXICON = load_header_lexicon()
LEXICON_BONUS = 0.5


@dataclass(frozen=True)
class CellValue:
    kind: str
    raw: str
    number: float | None = None
    date: tuple[int, int | None, int | None] | None = None

    @property
    def is_empty(self) -> bool:
        return self.kind == EMPTY

    @property
    def text_key(self) -> str:
        return norm_text(self.raw)


class Coord(NamedTuple):
    row: int
    col: int


def parse_number(raw: str) -> float | None:
    m = _NUMBER_RE.match(raw.strip())
    if not m:
        return None
    unit = m.group("unit")
    if unit is not None and unit.casefold() not in _UNITS:
        return None
    value = float(m.group("num").replace(",", ""))
    if m.group("sign") in ("-", "−"):
        value = -value
    return value


def parse_date(raw: str) -> tuple[int, int | None, int | None] | None:
    text = " ".join(raw.split())
    for pattern in _DATE_PATTERNS:
        m = pattern.match(text)
        if not m:
            continue
        groups = m.groupdict()
        month_raw = groups.get("month")
        if month_raw is None:
            month = None
        elif month_raw.isdigit():
            month = int(month_raw)
        else:
            month = MONTH_LOOKUP[month_raw.casefold()]
        day = int(groups["day"]) if groups.get("day") else None
        if month is not None and not 1 <= month <= 12:
            continue
        if day is not None and not 1 <= day <= 31:
            continue
        return (int(groups["year"]), month, day)
    return None


def parse_cell(raw: str) -> CellValue:
    """Type one cell; number beats date beats text."""
    raw = "" if raw is None else str(raw)
    if raw.strip().casefold() in _EMPTY_MARKERS:
        return CellValue(EMPTY, raw)
    number = parse_number(raw)
    if number is not None:
        return CellValue(NUMBER, raw, number=number)
    date = parse_date(raw)
    if date is not None:
        return CellValue(DATE, raw, date=date)
    return CellValue(TEXT, raw)


def format_number(value: float) -> str:
    if math.isfinite(value) and float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def _majority_kind(kinds: Iterable[str]) -> str:
    counts = Counter(k for k in kinds if k != EMPTY)
    total = sum(counts.values())
    for kind in (NUMBER, DATE):
        if total and counts[kind] * 2 > total:
            return kind
    return TEXT


@dataclass(frozen=True)
class Table:
    id: str
    headers: tuple[str, ...]
    cells: tuple[tuple[CellValue, ...], ...]
    col_types: tuple[str, ...]
    aggregate_rows: frozenset[int] = field(default_factory=frozenset)
    orientation: str = VERTICAL

    @property
    def row_count(self) -> int:
        return len(self.cells)

    @property
    def col_count(self) -> int:
        return len(self.headers)

    def cell(self, coord: Coord | Sequence[int]) -> CellValue:
        row, col = coord
        return self.cells[row][col]

    def body_rows(self) -> list[int]:
        """Indices of data rows that are not aggregates."""
        return [r for r in range(self.row_count) if r not in self.aggregate_rows]

    def conforms(self, coord: Coord | Sequence[int]) -> bool:
        """Non-empty cell whose kind matches its column type."""
        cell = self.cell(coord)
        return not cell.is_empty and cell.kind == self.col_types[coord[1]]

    def raw_rows(self) -> list[list[str]]:
        return [[c.raw for c in row] for row in self.cells]

    def to_json(self) -> dict:
        obj = {"id": self.id, "headers": list(self.headers), "rows": self.raw_rows()}
        if self.orientation != VERTICAL:
            obj["orientation"] = self.orientation
        return obj


def _check_grid(headers: Sequence[str], rows: Sequence[Sequence[str]]):
    if not headers:
        raise TableStructureError("table has no headers")
    for i, h in enumerate(headers):
        if not str(h).strip():
            raise TableStructureError(f"empty header name at column {i}")
    for i, row in enumerate(rows):
        if len(row) != len(headers):
            raise TableStructureError(
                f"row {i} has {len(row)} cells, expected {len(headers)}"
            )


def parse_table(raw: dict, table_id: str | None = None) -> Table:
    """Build a typed table from ``{"id", "headers", "rows"}``."""
    headers = raw.get("headers")
    rows = raw.get("rows", [])
    if not isinstance(headers, list) or not isinstance(rows, list):
        raise TableStructureError("table needs a header list and a row grid")
    if any(not isinstance(r, list) for r in rows):
        raise TableStructureError("rows must be lists of cells")
    _check_grid(headers, rows)
    headers = tuple(str(h) for h in headers)
    cells = tuple(tuple(parse_cell(c) for c in row) for row in rows)
    tid = table_id if table_id is not None else str(raw.get("id", ""))
    orientation = raw.get("orientation", VERTICAL)

    # Aggregate detection needs column types, and column types exclude aggregate
    # rows: type once over everything, detect, then retype without aggregates.
    prelim = _column_types(cells, len(headers), frozenset())
    draft = Table(tid, headers, cells, prelim, frozenset(), orientation)
    aggregates = frozenset(detect_aggregate_rows(draft))
    col_types = _column_types(cells, len(headers), aggregates)
    return Table(tid, headers, cells, col_types, aggregates, orientation)


def _column_types(cells, ncols: int, skip: frozenset[int]) -> tuple[str, ...]:
    return tuple(
        _majority_kind(row[c].kind for r, row in enumerate(cells) if r not in skip)
        for c in range(ncols)
    )


def _has_aggregate_label(row: Sequence[CellValue]) -> bool:
    first_text = next((c for c in row if c.kind == TEXT), None)
    return first_text is not None and first_text.raw.strip().casefold() in AGGREGATE_LABELS


def labeled_aggregate_rows(table: Table) -> set[int]:
    """Aggregate rows that announce themselves with a label such as "Total"."""
    return {r for r in table.aggregate_rows if _has_aggregate_label(table.cells[r])}


def detect_aggregate_rows(table: Table) -> set[int]:
    labeled = {r for r, row in enumerate(table.cells) if _has_aggregate_label(row)}

    # Sum rule: only columns whose every cell is numeric can be audited, and a
    # labeled total never counts among the summands.
    audited = []
    for c in range(table.col_count):
        if table.col_types[c] != NUMBER:
            continue
        column = [row[c] for row in table.cells]
        if len(column) >= 3 and all(v.kind == NUMBER for v in column):
            audited.append([0.0 if r in labeled else v.number for r, v in enumerate(column)])
    flagged = set(labeled)
    if audited:
        for r in range(table.row_count):
            if r not in labeled and all(_is_column_sum(values, r) for values in audited):
                flagged.add(r)
    return flagged


def _is_column_sum(values: list[float], r: int) -> bool:
    value = values[r]
    if value == 0:
        return False
    rest = math.fsum(values) - value
    return math.isclose(value, rest, rel_tol=AGGREGATE_REL_TOL, abs_tol=0.0)


def candidate_pool(table: Table, source: Coord) -> list[Coord]:
    row, col = source
    if row in table.aggregate_rows:
        raise NonReplaceableError(f"cell {tuple(source)} lies in an aggregate row")
    if not (0 <= row < table.row_count and 0 <= col < table.col_count):
        raise NonReplaceableError(f"cell {tuple(source)} is outside the table body")
    return [
        Coord(r, col)
        for r in range(table.row_count)
        if r != row and r not in table.aggregate_rows and table.conforms((r, col))
    ]


# -- orientation -------------------------------------------------------------

@dataclass(frozen=True)
class OrientationDecision:
    orientation: str           # "vertical" or "horizontal"
    vertical_score: float
    horizontal_score: float
    lexicon_bonus: float


def _homogeneity(raw_cells: Iterable[str]) -> float | None:
    kinds = [parse_cell(c).kind for c in raw_cells]
    kinds = [k for k in kinds if k != EMPTY]
    if not kinds:
        return None
    return Counter(kinds).most_common(1)[0][1] / len(kinds)


def _mean(scores) -> float:
    scores = [s for s in scores if s is not None]
    return sum(scores) / len(scores) if scores else 0.0


def _is_header_word(entry: str, lexicon: frozenset[str]) -> bool:
    entry = re.sub(r"\(.*?\)", " ", entry)
    tokens = norm_tokens(entry)
    if not tokens:
        return False
    return " ".join(tokens) in lexicon or tokens[-1] in lexicon


def detect_orientation(
    grid: Sequence[Sequence[str]], lexicon: frozenset[str] = DEFAULT_HEADER_LEXICON
) -> OrientationDecision:
    """Decide whether a grid (header row included) is laid out horizontally."""
    nrows = len(grid)
    ncols = len(grid[0]) if nrows else 0
    if nrows < 2 or ncols < 2:
        return OrientationDecision("vertical", 0.0, 0.0, 0.0)
    body = grid[1:]
    vertical = _mean(_homogeneity(row[c] for row in body) for c in range(ncols))
    horizontal = _mean(_homogeneity(row[1:]) for row in grid)
    first_col = [row[0] for row in grid[1:]]
    hits = sum(_is_header_word(e, lexicon) for e in first_col)
    bonus = LEXICON_BONUS * hits / len(first_col)
    horizontal += bonus
    orientation = "horizontal" if horizontal > vertical else "vertical"
    return OrientationDecision(orientation, vertical, horizontal, bonus)


def transpose(grid: Sequence[Sequence[str]]) -> list[list[str]]:
    if not grid:
        return []
    return [list(col) for col in zip(*grid)]


def grid_of(raw: dict) -> list[list[str]]:
    return [list(map(str, raw["headers"]))] + [list(map(str, r)) for r in raw.get("rows", [])]


def orient_table(
    raw: dict, table_id: str | None = None, lexicon: frozenset[str] = DEFAULT_HEADER_LEXICON
) -> tuple[Table, bool]:
    """Parse a raw table, flipping it once if it is laid out horizontally.

    Returns the table and whether a flip happened.  After a flip the old first
    column becomes the header row.
    """
    headers = raw.get("headers")
    rows = raw.get("rows", [])
    if isinstance(headers, list) and isinstance(rows, list) and all(isinstance(r, list) for r in rows):
        _check_grid(headers, rows)
        grid = grid_of(raw)
        if detect_orientation(grid, lexicon).orientation == "horizontal":
            flipped = transpose(grid)
            obj = {"id": raw.get("id", ""), "headers": flipped[0], "rows": flipped[1:],
                   "orientation": FLIPPED}
            return parse_table(obj, table_id), True
    return parse_table(raw, table_id), False


def flip_coord(coord: Sequence[int]) -> Coord | None:
    """Map a data-row coordinate of a horizontal grid onto its flipped table.

    Cells of the old first column become headers, which have no data coordinate.
    """
    row, col = coord
    if col == 0:
        return None
    return Coord(col - 1, row + 1)


def dense_rank(table: Table, row: int, col: int, direction: str) -> int | None:
    """Dense rank of ``table[row][col]`` among the column's body numbers.

    ``direction`` is ``"max"`` (largest value ranks 1) or ``"min"``.  Returns
    None when the cell itself is not a ranked number.
    """
    cell = table.cells[row][col]
    if row in table.aggregate_rows or cell.kind != NUMBER:
        return None
    values = {
        table.cells[r][col].number
        for r in table.body_rows()
        if table.cells[r][col].kind == NUMBER
    }
    ordered = sorted(values, reverse=(direction == "max"))
    return ordered.index(cell.number) + 1
