import pytest
from hypothesis import given, strategies as st

from tabrecast.errors import NonReplaceableError, TableStructureError
from tabrecast.tables import (
    DATE, EMPTY, NUMBER, TEXT, Coord, candidate_pool, dense_rank, detect_orientation, flip_coord,
    format_number, grid_of, labeled_aggregate_rows, orient_table, parse_cell, parse_date, parse_number,
    parse_table, transpose,
)

TABLE1 = {
    "id": "table1",
    "headers": ["Party", "Votes(thou)", "Seats"],
    "rows": [["Party A", "650", "120"], ["Party B", "570", "89"],
             ["Party C", "final count TBA", "89"], ["Total", "1235", "298"]],
}


@pytest.mark.parametrize("raw, kind", [
    ("120", NUMBER), ("1,235", NUMBER), ("-3.5", NUMBER), ("45%", NUMBER), ("$12", NUMBER),
    ("12 km", NUMBER), ("January 20, 2009", DATE), ("2009-01-20", DATE), ("20 Jan 2009", DATE),
    ("March 1999", DATE), ("Party A", TEXT), ("final count TBA", TEXT), ("12 apples", TEXT),
    ("", EMPTY), ("-", EMPTY), ("n/a", EMPTY),
])
def test_cell_kinds(raw, kind):
    assert parse_cell(raw).kind == kind


def test_parsed_values():
    assert parse_number("1,235") == 1235.0
    assert parse_number("−7") == -7.0
    assert parse_date("January 20, 2009") == (2009, 1, 20)
    assert parse_date("Sept. 3 1990") == (1990, 9, 3)
    assert parse_date("March 1999") == (1999, 3, None)
    assert parse_date("2009-13-01") is None


def test_table1_types_and_total():
    t = parse_table(TABLE1)
    assert t.col_types == (TEXT, NUMBER, NUMBER)
    assert t.aggregate_rows == {3}
    assert labeled_aggregate_rows(t) == {3}
    assert t.body_rows() == [0, 1, 2]


def test_unlabeled_sum_row_is_flagged():
    t = parse_table({"headers": ["Name", "N"], "rows": [["a", "2"], ["b", "3"], ["c", "5"]]})
    assert t.aggregate_rows == {2}
    assert labeled_aggregate_rows(t) == set()


def test_zero_rows_never_count_as_sums():
    t = parse_table({"headers": ["Name", "N"], "rows": [["a", "0"], ["b", "0"], ["c", "0"]]})
    assert t.aggregate_rows == frozenset()


def test_labeled_total_is_not_a_summand():
    t = parse_table({"headers": ["Name", "N"], "rows": [["a", "0"], ["b", "10"], ["Total", "10"]]})
    assert t.aggregate_rows == {2}


def test_candidate_pool_skips_source_aggregates_and_nonconforming():
    t = parse_table(TABLE1)
    assert candidate_pool(t, Coord(0, 2)) == [Coord(1, 2), Coord(2, 2)]
    assert candidate_pool(t, Coord(0, 1)) == [Coord(1, 1)]
    with pytest.raises(NonReplaceableError):
        candidate_pool(t, Coord(3, 2))


def test_ragged_grid_rejected():
    with pytest.raises(TableStructureError):
        parse_table({"headers": ["a", "b"], "rows": [["1"]]})


def test_dense_rank_ties_share_rank():
    t = parse_table(TABLE1)
    assert dense_rank(t, 0, 2, "max") == 1
    assert dense_rank(t, 1, 2, "max") == 2
    assert dense_rank(t, 2, 2, "max") == 2
    assert dense_rank(t, 1, 2, "min") == 1
    assert dense_rank(t, 3, 2, "max") is None


HORIZONTAL = {
    "id": "h",
    "headers": ["Name", "Alice", "Bob", "Cara"],
    "rows": [["Age", "31", "45", "27"], ["Height", "170", "182", "165"]],
}


def test_horizontal_table_is_flipped_once():
    assert detect_orientation(grid_of(HORIZONTAL)).orientation == "horizontal"
    table, flipped = orient_table(HORIZONTAL)
    assert flipped and table.orientation == "flipped_from_horizontal"
    assert table.headers == ("Name", "Age", "Height")
    assert table.raw_rows()[1] == ["Bob", "45", "182"]
    assert flip_coord((0, 2)) == Coord(1, 1)
    assert flip_coord((1, 0)) is None


def test_vertical_table_is_kept():
    table, flipped = orient_table(TABLE1)
    assert not flipped and table.orientation == "vertical"


def test_single_row_tables_stay_vertical():
    raw = {"headers": ["President #", "Name"], "rows": [["44", "Barack Obama"]]}
    assert detect_orientation(grid_of(raw)).orientation == "vertical"


grids = st.integers(1, 5).flatmap(
    lambda w: st.lists(st.lists(st.text(max_size=4), min_size=w, max_size=w), min_size=1, max_size=5))


@given(grids)
def test_transpose_is_an_involution(grid):
    assert transpose(transpose(grid)) == grid


@given(grids, st.data())
def test_flip_coord_tracks_transpose(grid, data):
    if len(grid) < 2 or len(grid[0]) < 2:
        return
    row = data.draw(st.integers(0, len(grid) - 2))     # data-row index, header excluded
    col = data.draw(st.integers(1, len(grid[0]) - 1))
    flipped = transpose(grid)
    r, c = flip_coord((row, col))
    assert flipped[1 + r][c] == grid[1 + row][col]


@given(st.integers(-10**9, 10**9))
def test_integers_round_trip_through_format(n):
    assert parse_number(format_number(float(n))) == n
