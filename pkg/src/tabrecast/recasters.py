"""Per-task adapters from source examples to NLI instances."""
from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Sequence

from .align import (
    DEFAULT_ABBREVIATIONS, EXACT, AlignmentSet, align_all, match_cell, normalize_tokens,
)
from .counterfactual import CfLimits, CfTable, build_cf_table, regenerate_hypotheses
from .errors import CounterfactualError, SkeletonError, SqlError
from .instances import CONTRADICT, TASKS, IdAllocator, NliInstance
from .lexicons import AntonymLexicon, load_antonyms
from .oracle import claim_key
from .perturb import antonym_contradictions, base_instance, generate_contradictions, generate_entailments
from .sqlmini import (
    Skeleton, TemplateConverter, answers_to_instances, execute, extract_skeleton, instantiate_skeleton,
    parse_sql, perturb_query,
)
from .tables import NUMBER, Coord, Table, flip_coord, orient_table, parse_cell, parse_table

DIALECTS = ("wikisql", "squall")


@dataclass
class Limits:
    max_entailments: int | None = 5
    max_contradictions: int | None = 5
    max_sql_perturbations: int | None = 5
    enable_cf: bool = False
    enable_paraphrase: bool = False
    auto_orient: bool = True

    def cf_limits(self) -> CfLimits:
        return CfLimits(self.max_entailments, self.max_contradictions, self.max_contradictions)


@dataclass
class Resources:
    antonyms: AntonymLexicon = field(default_factory=load_antonyms)
    abbreviations: dict = field(default_factory=lambda: DEFAULT_ABBREVIATIONS)
    converter: Any = field(default_factory=TemplateConverter)


@dataclass
class SourceExample:
    task: str
    table: dict
    description: str = ""
    highlighted: list = field(default_factory=list)
    question: str = ""
    answer: str = ""
    long_answer: str = ""
    supporting: list | None = None
    sql: str = ""
    dialect: str = "wikisql"

    @classmethod
    def from_json(cls, obj: dict, task: str) -> "SourceExample":
        if task not in TASKS:
            raise ValueError(f"unknown task {task!r}")
        if not isinstance(obj, dict) or not isinstance(obj.get("table"), dict):
            raise ValueError("example needs a table object")

        def text(key, required=True):
            v = obj.get(key)
            if v is None and not required:
                return ""
            if not isinstance(v, (str, int, float)) or isinstance(v, bool):
                raise ValueError(f"field {key!r} missing or not text")
            return str(v)

        def coords(key):
            v = obj.get(key)
            if v is None:
                return None
            if not isinstance(v, list) or any(
                not isinstance(c, list) or len(c) != 2 or not all(isinstance(x, int) for x in c) for c in v
            ):
                raise ValueError(f"field {key!r} must be a list of [row, col] pairs")
            return [list(c) for c in v]

        ex = cls(task, obj["table"])
        if task == "T2TG":
            ex.description = text("description")
            ex.highlighted = coords("highlighted") or []
        elif task == "TQA_short":
            ex.question, ex.answer = text("question"), text("answer")
        elif task == "TQA_long":
            ex.question = text("question", required=False)
            ex.long_answer = text("long_answer")
            ex.supporting = coords("supporting")
        else:
            ex.question, ex.sql = text("question"), text("sql")
            ex.dialect = str(obj.get("dialect", "wikisql")).casefold()
            if ex.dialect not in DIALECTS:
                raise ValueError(f"unknown dialect {ex.dialect!r}")
        return ex


@dataclass
class RecastResult:
    table: Table | None
    instances: list[NliInstance] = field(default_factory=list)
    cf: tuple[CfTable, list[NliInstance]] | None = None
    skeleton: Skeleton | None = None
    diag: Counter = field(default_factory=Counter)


def table_id_of(raw: dict) -> str:
    tid = raw.get("id")
    if tid not in (None, ""):
        return str(tid)
    body = json.dumps({"headers": raw.get("headers"), "rows": raw.get("rows")},
                      sort_keys=True, ensure_ascii=False)
    return "t" + hashlib.sha1(body.encode("utf-8")).hexdigest()[:12]


def load_table(raw: dict, auto_orient: bool) -> tuple[Table, bool]:
    tid = table_id_of(raw)
    if auto_orient:
        return orient_table(raw, tid)
    return parse_table(raw, tid), False


def _remap(coords: Sequence[Sequence[int]], table: Table, flipped: bool, diag: Counter) -> list[Coord]:
    out = []
    for c in coords:
        coord = flip_coord(c) if flipped else Coord(*c)
        if coord is None:
            diag["highlight_became_header"] += 1
            continue
        if not (0 <= coord.row < table.row_count and 0 <= coord.col < table.col_count):
            raise ValueError(f"cell {list(c)} is outside the table")
        out.append(coord)
    return out


# -- shared E/C engine ---------------------------------------------------------------

def _perturb(
    table: Table, aset: AlignmentSet, task: str, limits: Limits, res: Resources,
    result: RecastResult, ids: IdAllocator, *, entailments: bool,
):
    diag = result.diag
    flags = {} if aset.alignments else {"low_confidence": True}
    base = base_instance(table, aset, source_task=task, flags=flags, ids=ids)
    out = [base]
    if aset.alignments:
        kw = dict(base_id=base.id, source_task=task, diag=diag, ids=ids)
        if entailments:
            if aset.complete:
                out += generate_entailments(table, aset, limits.max_entailments, **kw)
            else:
                diag["entailments_skipped_incomplete_alignment"] += 1
        out += generate_contradictions(table, aset, limits.max_contradictions, **kw)
        out += antonym_contradictions(aset.base, res.antonyms, limits.max_contradictions,
                                      table=table, aset=aset, **kw)
    else:
        diag["zero_alignments"] += 1
    result.instances += out
    if limits.enable_cf:
        _counterfactual(table, aset, out, task, limits, res, result)


def _counterfactual(table, aset, instances, task, limits, res, result):
    for inst in instances:
        if inst.label != CONTRADICT or inst.lineage.op != "substitute_some":
            continue
        if len(inst.lineage.substitutions) != 1:
            continue
        try:
            cf = build_cf_table(table, inst)
        except CounterfactualError:
            result.diag["cf_swap_refused"] += 1
            continue
        suite = regenerate_hypotheses(
            cf, inst.hypothesis, aset.relevant_cells, limits.cf_limits(),
            lexicon=res.antonyms, abbreviations=res.abbreviations, source_task=task,
            diag=result.diag,
        )
        result.cf = (cf, suite)
        return


# -- adapters ------------------------------------------------------------------------

def recast_t2tg(ex: SourceExample, limits: Limits | None = None, res: Resources | None = None) -> RecastResult:
    limits, res = limits or Limits(), res or Resources()
    table, flipped = load_table(ex.table, limits.auto_orient)
    result = RecastResult(table)
    relevant = _remap(ex.highlighted, table, flipped, result.diag)
    aset = align_all(table, relevant, normalize_tokens(ex.description), res.abbreviations)
    _perturb(table, aset, "T2TG", limits, res, result, IdAllocator(), entailments=True)
    return result


def _matched_cells(table: Table, answer: str, texts: Sequence[str], res: Resources) -> list[Coord]:
    """Cells equal to the answer, then cells quoted verbatim in any of ``texts``."""
    hyps = [normalize_tokens(t) for t in texts if t.strip()]
    answer_cells, quoted = [], []
    target = parse_cell(answer) if answer.strip() else None
    for r in range(table.row_count):
        for c in range(table.col_count):
            cell = table.cells[r][c]
            if cell.is_empty:
                continue
            if target is not None and claim_key(EXACT, (), cell) == claim_key(EXACT, (), target):
                answer_cells.append(Coord(r, c))
                continue
            for h in hyps:
                al = match_cell(cell, (r, c), h, res.abbreviations)
                if al is not None and al.kind == EXACT:
                    quoted.append(Coord(r, c))
                    break
    # A value repeated in several rows most likely refers to the row shared
    # with the other matches, so keep one cell per (column, value).
    quoted = _dedupe(table, quoted, {c.row for c in answer_cells})
    answer_cells = _dedupe(table, answer_cells, {c.row for c in quoted})
    return quoted + answer_cells


def _dedupe(table: Table, cells: list[Coord], rows: set[int]) -> list[Coord]:
    groups: dict = {}
    for c in cells:
        groups.setdefault((c.col, claim_key(EXACT, (), table.cell(c))), []).append(c)
    out = []
    for group in groups.values():
        out.append(next((c for c in group if c.row in rows), group[0]))
    return sorted(out)


def recast_tqa_short(ex: SourceExample, limits: Limits | None = None, res: Resources | None = None) -> RecastResult:
    limits, res = limits or Limits(), res or Resources()
    table, _ = load_table(ex.table, limits.auto_orient)
    result = RecastResult(table)
    statement = res.converter.qa2d(ex.question, ex.answer, table)
    if not statement:
        result.diag["conversion_failed"] += 1
        return result
    relevant = _matched_cells(table, ex.answer, [ex.question], res)
    aset = align_all(table, relevant, normalize_tokens(statement), res.abbreviations)
    if _is_aggregate_answer(table, ex.answer):
        # a count or sum read off the table has no cell to perturb
        result.diag["aggregate_answer_base_only"] += 1
        result.instances.append(base_instance(table, aset, source_task="TQA_short"))
    else:
        _perturb(table, aset, "TQA_short", limits, res, result, IdAllocator(), entailments=False)
    _mark_converted(result, res)
    return result


def _is_aggregate_answer(table: Table, answer: str) -> bool:
    target = parse_cell(answer)
    if target.kind != NUMBER:
        return False
    key = claim_key(EXACT, (), target)
    return not any(claim_key(EXACT, (), cell) == key for row in table.cells for cell in row)


def recast_tqa_long(ex: SourceExample, limits: Limits | None = None, res: Resources | None = None) -> RecastResult:
    limits, res = limits or Limits(), res or Resources()
    table, flipped = load_table(ex.table, limits.auto_orient)
    result = RecastResult(table)
    if ex.supporting:
        relevant = _remap(ex.supporting, table, flipped, result.diag)
        supported = True
    else:
        result.diag["no_supporting_cells"] += 1
        relevant = _matched_cells(table, "", [ex.question, ex.long_answer], res)
        supported = False
    aset = align_all(table, relevant, normalize_tokens(ex.long_answer), res.abbreviations)
    _perturb(table, aset, "TQA_long", limits, res, result, IdAllocator(), entailments=supported)
    return result


def recast_spt(ex: SourceExample, limits: Limits | None = None, res: Resources | None = None) -> RecastResult:
    limits, res = limits or Limits(), res or Resources()
    table = parse_table(ex.table, table_id_of(ex.table))
    result = RecastResult(table)
    diag = result.diag
    try:
        q = parse_sql(ex.sql, table)
        answer = execute(q, table)
    except SqlError as exc:
        diag[f"sql_{type(exc).__name__}"] += 1
        return result
    ids = IdAllocator()
    kw = dict(max_contradictions=limits.max_contradictions, source_task="SPT", diag=diag, ids=ids)
    base = answers_to_instances(ex.question, answer, table, res.converter, query=q, **kw)
    result.instances += base
    base_id = base[0].id if base else ""
    for nq, nquestion in perturb_query(q, ex.question, table, limits.max_sql_perturbations, diag):
        result.instances += answers_to_instances(
            nquestion, execute(nq, table), table, res.converter, query=nq, base_id=base_id, **kw)
    if ex.dialect == "squall":
        try:
            result.skeleton = extract_skeleton(q, ex.question, table)
        except SkeletonError:
            diag["skeleton_refused"] += 1
    return result


def skeleton_instances(
    skeleton: Skeleton, table: Table, res: Resources, limits: Limits, diag: Counter, ids: IdAllocator,
) -> list[NliInstance]:
    """Instantiate a skeleton on ``table`` and recast its executed answer."""
    hit = instantiate_skeleton(skeleton, table)
    if hit is None:
        return []
    q, question = hit
    try:
        answer = execute(q, table)
    except SqlError:
        diag["skeleton_empty_result"] += 1
        return []
    return answers_to_instances(question, answer, table, res.converter, query=q,
                                max_contradictions=limits.max_contradictions, source_task="SPT",
                                diag=diag, ids=ids)


def _mark_converted(result: RecastResult, res: Resources):
    name = getattr(res.converter, "name", "template")
    if name != "template":
        for inst in result.instances:
            inst.lineage.flags["converter"] = name


def paraphrase_all(instances: list[NliInstance], converter) -> None:
    for inst in instances:
        new = converter.paraphrase(inst.hypothesis)
        if new and new != inst.hypothesis:
            inst.lineage.flags["paraphrased"] = True
            inst.lineage.flags["unparaphrased"] = inst.hypothesis
            inst.hypothesis = new


ADAPTERS = {
    "T2TG": recast_t2tg,
    "TQA_short": recast_tqa_short,
    "TQA_long": recast_tqa_long,
    "SPT": recast_spt,
}


def recast(ex: SourceExample, limits: Limits | None = None, res: Resources | None = None) -> RecastResult:
    limits, res = limits or Limits(), res or Resources()
    result = ADAPTERS[ex.task](ex, limits, res)
    if limits.enable_paraphrase:
        paraphrase_all(result.instances, res.converter)
        if result.cf is not None:
            paraphrase_all(result.cf[1], res.converter)
    return result
