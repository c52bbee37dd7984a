import pytest
from hypothesis import given, strategies as st

from tabrecast.align import align_all, normalize_tokens
from tabrecast.counterfactual import (
    CfSwap, apply_swaps, build_cf_table, cf_from_json, check_swap, regenerate_hypotheses,
)
from tabrecast.errors import CounterfactualError
from tabrecast.lexicons import load_antonyms
from tabrecast.perturb import generate_contradictions
from tabrecast.tables import Coord, parse_table

TABLE1 = parse_table({
    "id": "table1",
    "headers": ["Party", "Votes(thou)", "Seats"],
    "rows": [["Party A", "650", "120"], ["Party B", "570", "89"],
             ["Party C", "final count TBA", "89"], ["Total", "1235", "298"]],
})
CELLS = [(0, 0), (0, 2), (3, 2)]


def _seed():
    aset = align_all(TABLE1, CELLS, normalize_tokens("Party A won 120 out of 298 seats."))
    contras = generate_contradictions(TABLE1, aset, limit=None)
    return next(c for c in contras if c.hypothesis == "Party B won 120 out of 298 seats.")


def test_party_swap_builds_the_counterfactual():
    cf = build_cf_table(TABLE1, _seed())
    assert cf.table.raw_rows()[:2] == [["Party B", "650", "120"], ["Party A", "570", "89"]]
    assert cf.swaps == (CfSwap(Coord(0, 0), Coord(1, 0), 0),)
    assert cf.table.id == "table1~cf0.0.1"
    assert cf.table.aggregate_rows == TABLE1.aggregate_rows


def test_regenerated_suite_on_the_counterfactual():
    cf = build_cf_table(TABLE1, _seed())
    suite = regenerate_hypotheses(cf, "Party B won 120 out of 298 seats.", CELLS, lexicon=load_antonyms())
    labels = {(i.hypothesis, i.label) for i in suite}
    assert ("Party B won 120 out of 298 seats.", "entail") in labels
    assert ("Party A won 89 out of 298 seats.", "entail") in labels
    assert ("Party A won 120 out of 298 seats.", "contradict") in labels
    assert all(i.variant == "CF" and i.lineage.cf["base_table_id"] == "table1" for i in suite)


def test_numeric_swaps_under_a_total_are_refused():
    with pytest.raises(CounterfactualError):
        check_swap(TABLE1, CfSwap(Coord(0, 2), Coord(1, 2), 2))
    with pytest.raises(CounterfactualError):
        check_swap(TABLE1, CfSwap(Coord(0, 0), Coord(3, 0), 0))
    with pytest.raises(CounterfactualError):
        check_swap(TABLE1, CfSwap(Coord(1, 0), Coord(1, 0), 0))


def test_only_substitution_contradictions_seed():
    seed = _seed()
    seed.label = "entail"
    with pytest.raises(CounterfactualError):
        build_cf_table(TABLE1, seed)


def test_swap_cells_must_share_a_column():
    with pytest.raises(ValueError):
        CfSwap(Coord(0, 0), Coord(1, 1), 0)


def test_serialized_cf_rebuilds_from_the_original():
    cf = build_cf_table(TABLE1, _seed())
    assert cf_from_json(TABLE1, cf.to_json()) == cf.table
    assert CfSwap.from_json(cf.swaps[0].to_json()) == cf.swaps[0]


@st.composite
def tables_and_swaps(draw):
    ncols = draw(st.integers(1, 4))
    nrows = draw(st.integers(2, 6))
    rows = draw(st.lists(st.lists(st.sampled_from(["1", "2", "x", "y", "2001-01-01", ""]),
                                  min_size=ncols, max_size=ncols), min_size=nrows, max_size=nrows))
    table = parse_table({"id": "r", "headers": [f"h{i}" for i in range(ncols)], "rows": rows})
    swaps = []
    for _ in range(draw(st.integers(1, 3))):
        col = draw(st.integers(0, ncols - 1))
        a, b = draw(st.integers(0, nrows - 1)), draw(st.integers(0, nrows - 1))
        swaps.append(CfSwap(Coord(a, col), Coord(b, col), col))
    return table, swaps


@given(tables_and_swaps())
def test_swaps_undone_in_reverse_restore_the_table(case):
    table, swaps = case
    cf = apply_swaps(table, swaps, "cf")
    assert apply_swaps(cf, list(reversed(swaps)), table.id) == table


@given(tables_and_swaps())
def test_single_swap_is_an_involution(case):
    table, swaps = case
    once = apply_swaps(table, swaps[:1])
    assert apply_swaps(once, swaps[:1]).to_json() == table.to_json()
