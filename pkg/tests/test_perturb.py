from collections import Counter

import pytest

from tabrecast.align import align_all, normalize_tokens
from tabrecast.lexicons import load_antonyms
from tabrecast.oracle import Claim, RankClaim, evaluate, guard_accidental_entailment
from tabrecast.perturb import (
    antonym_contradictions, base_instance, generate_contradictions, generate_entailments, rank_rewrite,
)
from tabrecast.tables import parse_cell, parse_table

TABLE1 = parse_table({
    "id": "table1",
    "headers": ["Party", "Votes(thou)", "Seats"],
    "rows": [["Party A", "650", "120"], ["Party B", "570", "89"],
             ["Party C", "final count TBA", "89"], ["Total", "1235", "298"]],
})
OUT_OF = ("Party A won 120 out of 298 seats.", [(0, 0), (0, 2), (3, 2)])
MOST = ("Party A won the most seats.", [(0, 0), (0, 2)])


def _aset(text, cells, table=TABLE1):
    return align_all(table, cells, normalize_tokens(text))


def _texts(insts):
    return {i.hypothesis for i in insts}


def test_out_of_entailments_substitute_the_whole_row():
    insts = generate_entailments(TABLE1, _aset(*OUT_OF))
    assert _texts(insts) == {"Party B won 89 out of 298 seats.", "Party C won 89 out of 298 seats."}
    assert all(i.label == "entail" and i.lineage.op == "substitute_all" for i in insts)


def test_superlative_entailments_rewrite_the_rank():
    insts = generate_entailments(TABLE1, _aset(*MOST))
    assert _texts(insts) == {"Party B won the second most seats.", "Party C won the second most seats."}
    assert {i.lineage.op for i in insts} == {"rank_rewrite"}


def test_contradictions_pass_the_guard():
    insts = generate_contradictions(TABLE1, _aset(*OUT_OF), limit=None)
    texts = _texts(insts)
    assert "Party B won 120 out of 298 seats." in texts
    assert "Party A won 89 out of 298 seats." in texts
    # Party B and Party C really did win 89 seats
    assert "Party B won 89 out of 298 seats." not in texts
    assert "Party C won 89 out of 298 seats." not in texts
    assert all(i.label == "contradict" for i in insts)


def test_aggregate_cell_substitution_is_numeric_only():
    texts = _texts(generate_contradictions(TABLE1, _aset(*OUT_OF), limit=None))
    assert "Party A won 120 out of 89 seats." in texts
    assert not any("Total" in t for t in texts)


def test_limits_are_respected():
    assert len(generate_contradictions(TABLE1, _aset(*OUT_OF), limit=2)) == 2
    assert generate_entailments(TABLE1, _aset(*OUT_OF), limit=0) == []


def test_incomplete_alignment_blocks_entailments():
    diag = Counter()
    aset = _aset("Party A did well.", [(0, 0), (0, 2)])
    assert generate_entailments(TABLE1, aset, diag=diag) == []
    assert diag["entailments_skipped_incomplete_alignment"] == 1


def test_superlative_antonym_is_verified():
    aset = _aset(*MOST)
    insts = antonym_contradictions(aset.base, load_antonyms(), table=TABLE1, aset=aset)
    assert _texts(insts) == {"Party A won the least seats."}
    (inst,) = insts
    assert inst.lineage.ranks and inst.lineage.flags.get("oracle") is not False


def test_antonym_that_stays_true_is_dropped():
    t = parse_table({"headers": ["Name", "Wins"], "rows": [["Kilo", "3"], ["Lima", "3"]]})
    aset = _aset("Kilo secured the most wins.", [(0, 0), (0, 1)], t)
    assert antonym_contradictions(aset.base, load_antonyms(), table=t, aset=aset) == []


def test_plain_antonyms_are_marked_unverifiable():
    aset = _aset("Party A polled higher.", [(0, 0)])
    insts = antonym_contradictions(aset.base, load_antonyms(), table=TABLE1, aset=aset)
    assert _texts(insts) == {"Party A polled lower."}
    assert insts[0].lineage.flags["oracle"] is False


def test_rank_rewrite_phrasing():
    aset = _aset(*MOST)
    (sup,) = aset.superlatives
    assert [rank_rewrite(sup, r) for r in (1, 2, 3)] == ["most", "second most", "third most"]
    with pytest.raises(ValueError):
        rank_rewrite(sup, 4)


def test_base_instance_grounds_its_claims():
    base = base_instance(TABLE1, _aset(*OUT_OF))
    assert base.label == "entail" and base.lineage.base_id == base.id
    assert {c.get("aggregate_row") for c in base.lineage.claims} == {None, 3}


def test_lineage_edits_rebuild_hypotheses():
    from tabrecast.instances import apply_edits
    for inst in generate_contradictions(TABLE1, _aset(*OUT_OF), limit=None):
        assert apply_edits(inst.lineage.base_text, inst.lineage.edits) == inst.hypothesis


def test_oracle_groups_and_aggregates():
    v = lambda raw: parse_cell(raw)
    ok = evaluate(TABLE1, [Claim(0, v("Party B")), Claim(2, v("89")), Claim(2, v("298"), aggregate_row=3)])
    assert ok.holds
    bad = evaluate(TABLE1, [Claim(0, v("Party B")), Claim(2, v("120"))])
    assert not bad.holds and bad.failing_groups == [0]
    ranked = evaluate(TABLE1, [Claim(0, v("Party C"))], [RankClaim(2, "max", 2)])
    assert ranked.holds


def test_guard_rejects_the_empty_tuple():
    assert guard_accidental_entailment(TABLE1, []) is False
    assert guard_accidental_entailment(TABLE1, [(0, parse_cell("Party B")), (2, parse_cell("120"))])
    assert not guard_accidental_entailment(TABLE1, [(0, parse_cell("Party C")), (2, parse_cell("89"))])
