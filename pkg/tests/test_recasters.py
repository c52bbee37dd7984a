import json
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from corpus import random_example, tuple_truth
from tabrecast import fixture_path
from tabrecast.plugin import PluginClient
from tabrecast.recasters import Limits, Resources, SourceExample, recast, table_id_of
from tabrecast.tables import labeled_aggregate_rows

STUB = str(Path(__file__).with_name("stub_plugin.py"))
TABLE1 = json.loads(fixture_path("table1_t2tg.jsonl").read_text().splitlines()[0])["table"]


def _labels(result):
    return {(i.hypothesis, i.label) for i in result.instances}


def test_t2tg_base_and_perturbations():
    ex = {"table": TABLE1, "description": "Party A won 120 out of 298 seats.",
          "highlighted": [[0, 0], [0, 2], [3, 2]]}
    labels = _labels(recast(SourceExample.from_json(ex, "T2TG")))
    assert ("Party A won 120 out of 298 seats.", "entail") in labels
    assert ("Party B won 89 out of 298 seats.", "entail") in labels
    assert ("Party B won 120 out of 298 seats.", "contradict") in labels


def test_horizontal_table_highlights_follow_the_flip():
    raw = {"id": "h", "headers": ["Name", "Alice", "Bob", "Cara"],
           "rows": [["Age", "31", "45", "27"], ["Height", "170", "182", "165"]]}
    ex = {"table": raw, "description": "Bob is 45 years old.", "highlighted": [[0, 2]]}
    result = recast(SourceExample.from_json(ex, "T2TG"))
    assert result.table.orientation == "flipped_from_horizontal"
    (base, *_) = result.instances
    assert base.lineage.claims[0]["source"] == [1, 1]
    assert result.diag["highlight_became_header"] == 0


def test_tqa_short_gives_contradictions_from_matched_entities():
    ex = {"table": TABLE1, "question": "Which party won 120 seats?", "answer": "Party A"}
    result = recast(SourceExample.from_json(ex, "TQA_short"))
    labels = _labels(result)
    assert ("Party A won 120 seats.", "entail") in labels
    assert ("Party B won 120 seats.", "contradict") in labels
    assert sum(i.label == "entail" for i in result.instances) == 1


def test_tqa_short_with_plugin_statement_is_flagged():
    ex = {"table": TABLE1, "question": "How many seats did Party B win?", "answer": "89"}
    with PluginClient([sys.executable, STUB]) as plugin:
        result = recast(SourceExample.from_json(ex, "TQA_short"), res=Resources(converter=plugin))
    assert result.instances[0].hypothesis == "Party B won 89 seats."
    assert all(i.lineage.flags["converter"] == "plugin" for i in result.instances)


def test_tqa_short_unconvertible_question():
    ex = {"table": TABLE1, "question": "How many seats did Party B win?", "answer": "89"}
    result = recast(SourceExample.from_json(ex, "TQA_short"))
    assert result.instances == [] and result.diag["conversion_failed"] == 1


def test_tqa_long_with_supporting_cells():
    ex = {"table": TABLE1, "long_answer": "Party A won 120 seats.", "supporting": [[0, 0], [0, 2]]}
    labels = _labels(recast(SourceExample.from_json(ex, "TQA_long")))
    assert ("Party B won 89 seats.", "entail") in labels
    assert ("Party A won 89 seats.", "contradict") in labels


def test_tqa_long_without_supporting_cells_skips_entailments():
    ex = {"table": TABLE1, "question": "How did Party A do?", "long_answer": "Party A won 120 seats."}
    result = recast(SourceExample.from_json(ex, "TQA_long"))
    assert result.diag["no_supporting_cells"] == 1
    assert [i.lineage.op for i in result.instances if i.label == "entail"] == ["identity"]
    assert ("Party B won 120 seats.", "contradict") in _labels(result)


def test_spt_bad_sql_is_diagnosed():
    ex = {"table": TABLE1, "question": "q?", "sql": "select party from T order by seats"}
    result = recast(SourceExample.from_json(ex, "SPT"))
    assert result.instances == [] and result.diag["sql_UnsupportedSyntaxError"] == 1


def test_paraphrase_marks_instances():
    ex = {"table": TABLE1, "description": "Party A won 120 out of 298 seats.",
          "highlighted": [[0, 0], [0, 2], [3, 2]]}
    with PluginClient([sys.executable, STUB]) as plugin:
        result = recast(SourceExample.from_json(ex, "T2TG"), Limits(enable_paraphrase=True),
                        Resources(converter=plugin))
    (para,) = [i for i in result.instances if i.lineage.flags.get("paraphrased")]
    assert para.hypothesis == "Out of a total of 298 available seats, Party B won 89."
    assert para.lineage.flags["unparaphrased"] == "Party B won 89 out of 298 seats."


def test_table_ids_are_content_hashes_when_missing():
    raw = {"headers": ["a"], "rows": [["1"]]}
    assert table_id_of(raw) == table_id_of(dict(raw)) and table_id_of(raw).startswith("t")
    assert table_id_of({**raw, "rows": [["2"]]}) != table_id_of(raw)
    assert table_id_of(TABLE1) == "table1"


@pytest.mark.parametrize("obj, task", [
    ({"table": TABLE1}, "T2TG"),
    ({"table": TABLE1, "description": "x", "highlighted": [[0]]}, "T2TG"),
    ({"description": "x"}, "T2TG"),
    ({"table": TABLE1, "question": "q", "sql": "select party from T", "dialect": "mysql"}, "SPT"),
    ({"table": TABLE1, "description": "x"}, "NOPE"),
])
def test_invalid_examples(obj, task):
    with pytest.raises(ValueError):
        SourceExample.from_json(obj, task)



@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_labels_agree_with_a_row_scan(rng):
    ex = random_example(rng, 0)
    result = recast(SourceExample.from_json(ex, "T2TG"), Limits(enable_cf=True))
    totals = labeled_aggregate_rows(result.table)
    suites = [(result.table, result.instances)] + ([(result.cf[0].table, result.cf[1])] if result.cf else [])
    for table, insts in suites:
        for inst in insts:
            verdict = tuple_truth(inst.lineage.to_json(), table.raw_rows(), table.body_rows(), totals)
            assert verdict in (None, inst.label == "entail"), inst.hypothesis


def test_tqa_short_aggregate_answer_keeps_only_the_base():
    ex = {"table": TABLE1, "question": "How many parties won 89 seats?", "answer": "2"}
    with PluginClient([sys.executable, STUB]) as plugin:
        plugin.fallback.qa2d = lambda q, a, t=None: "2 parties won 89 seats."
        result = recast(SourceExample.from_json(ex, "TQA_short"), res=Resources(converter=plugin))
    assert [(i.hypothesis, i.label) for i in result.instances] == [("2 parties won 89 seats.", "entail")]
    assert result.diag["aggregate_answer_base_only"] == 1
