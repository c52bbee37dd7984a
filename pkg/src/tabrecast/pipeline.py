"""Batch orchestration: recast, split, stats and validate over JSONL files."""
from __future__ import annotations

import json
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from pathlib import Path
from typing import Iterable, Iterator

from .align import DEFAULT_ABBREVIATIONS
from .counterfactual import cf_from_json
from .errors import PluginProtocolError, RecastError
from .instances import CONTRADICT, ENTAIL, IdAllocator, NliInstance, apply_edits, claims_from_lineage
from .lexicons import load_abbreviations, load_antonyms
from .oracle import evaluate
from .recasters import Limits, RecastResult, Resources, SourceExample, recast, skeleton_instances
from .sqlmini import TemplateConverter, derive_sql_label
from .tables import Table, parse_table

MAX_SEED = 2**64 - 1
BATCH_LINES = 256


class UsageError(ValueError):
    """Bad configuration or arguments."""


class PipelineIOError(OSError):
    """Input could not be read or output could not be written."""


@dataclass
class Config:
    task: str
    input: str
    output: str
    seed: int = 0
    limits: Limits = field(default_factory=Limits)
    antonyms_path: str | None = None
    abbrev_path: str | None = None
    plugin: str | None = None
    plugin_timeout: float = 10.0
    workers: int = 1
    skeletons: bool = False
    tables_output: str | None = None

    def __post_init__(self):
        if not 0 <= self.seed <= MAX_SEED:
            raise UsageError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")

    @property
    def tables_path(self) -> Path:
        if self.tables_output:
            return Path(self.tables_output)
        return tables_sidecar(self.output)


def tables_sidecar(output: str | Path) -> Path:
    return Path(output).with_suffix(".tables.jsonl")


@dataclass
class Stats:
    entail: int = 0
    contradict: int = 0
    variants: dict = field(default_factory=dict)
    skipped: Counter = field(default_factory=Counter)
    diagnostics: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return self.entail + self.contradict

    def add(self, variant: str, label: str):
        v = self.variants.setdefault(variant, {ENTAIL: 0, CONTRADICT: 0, "total": 0})
        v[label] += 1
        v["total"] += 1
        if label == ENTAIL:
            self.entail += 1
        else:
            self.contradict += 1

    def counts(self) -> dict:
        return {"entail": self.entail, "contradict": self.contradict, "total": self.total,
                "variants": {k: dict(self.variants[k]) for k in sorted(self.variants)}}

    def to_json(self) -> dict:
        out = self.counts()
        out["skipped"] = dict(sorted(self.skipped.items()))
        if self.diagnostics:
            out["diagnostics"] = dict(sorted(self.diagnostics.items()))
        return out


# -- workers ----------------------------------------------------------------------

_STATE: dict = {}


def _init_worker(task: str, limits: Limits, antonyms_path, abbrev_path, converter=None):
    _STATE.update(
        task=task, limits=limits,
        resources=Resources(
            antonyms=load_antonyms(antonyms_path),
            abbreviations=load_abbreviations(abbrev_path) if abbrev_path else DEFAULT_ABBREVIATIONS,
            converter=converter or TemplateConverter(),
        ),
    )


def _work(line: str):
    try:
        ex = SourceExample.from_json(json.loads(line), _STATE["task"])
        return "ok", recast(ex, _STATE["limits"], _STATE["resources"])
    except PluginProtocolError:
        raise
    except json.JSONDecodeError:
        return "skip", "malformed_json"
    except (ValueError, KeyError, TypeError, IndexError, RecastError) as exc:
        return "skip", f"invalid_example:{type(exc).__name__}"


def _lines(path: str | Path) -> Iterator[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield line
    except OSError as exc:
        raise PipelineIOError(f"cannot read {path}: {exc}") from exc


def _batched(it: Iterable[str], n: int) -> Iterator[list[str]]:
    it = iter(it)
    while batch := list(islice(it, n)):
        yield batch


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False) + "\n"


def _open_out(path: str | Path):
    try:
        return open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise PipelineIOError(f"cannot write {path}: {exc}") from exc


class _Writer:
    """Gives instances their final ids in output order and keeps the tables sidecar."""

    def __init__(self, out, tables_out, stats: Stats):
        self.out, self.tables_out, self.stats = out, tables_out, stats
        self.final_ids = IdAllocator()
        self.og_tables: dict[str, Table] = {}
        self.cf_done: set[str] = set()

    def _table(self, obj: dict):
        self.tables_out.write(_dump(obj))

    def instances(self, instances: list[NliInstance], seeds: dict | None = None) -> dict:
        local = {inst.id: self.final_ids(inst.table_id, inst.variant, inst.lineage.op) for inst in instances}
        for inst in instances:
            inst.id = local[inst.id]
            inst.lineage.base_id = local.get(inst.lineage.base_id, inst.lineage.base_id)
            if inst.lineage.cf and seeds:
                inst.lineage.cf["seed"] = seeds.get(inst.lineage.cf["seed"], inst.lineage.cf["seed"])
            self.out.write(_dump(inst.to_json()))
            self.stats.add(inst.variant, inst.label)
        return local

    def result(self, result: RecastResult):
        self.stats.diagnostics.update(result.diag)
        if result.table.id not in self.og_tables:
            self.og_tables[result.table.id] = result.table
            self._table(result.table.to_json())
        local = self.instances(result.instances)
        if result.cf is None:
            return
        cf, suite = result.cf
        if cf.base_table_id in self.cf_done:
            self.stats.diagnostics["cf_table_already_built"] += 1
            return
        self.cf_done.add(cf.base_table_id)
        obj = cf.to_json()
        obj["seed"] = local.get(obj["seed"], obj["seed"])
        self._table(obj)
        self.instances(suite, local)


def run(config: Config) -> Stats:
    """Recast every input line; output order follows input order for any worker count."""
    stats = Stats()
    plugin = None
    if config.plugin:
        from .plugin import PluginClient
        plugin = PluginClient(config.plugin, timeout=config.plugin_timeout, seed=config.seed)
    init_args = (config.task, config.limits, config.antonyms_path, config.abbrev_path)
    _init_worker(*init_args, plugin)
    executor = None
    if config.workers > 1:
        if plugin is not None:
            executor = ThreadPoolExecutor(config.workers)     # one shared plugin pipe
        else:
            executor = ProcessPoolExecutor(config.workers, initializer=_init_worker, initargs=init_args)
    try:
        with _open_out(config.output) as out, _open_out(config.tables_path) as tables_out:
            writer = _Writer(out, tables_out, stats)
            skeletons = []
            for batch in _batched(_lines(config.input), BATCH_LINES * config.workers):
                results = executor.map(_work, batch) if executor else map(_work, batch)
                for status, payload in results:
                    if status == "skip":
                        stats.skipped[payload] += 1
                        continue
                    writer.result(payload)
                    if config.skeletons and payload.skeleton is not None:
                        skeletons.append((payload.skeleton, payload.table.id))
            _skeleton_pass(skeletons, writer, config, stats)
    finally:
        if executor is not None:
            executor.shutdown()
        if plugin is not None:
            stats.diagnostics.update(plugin.diag)
            plugin.close()
    return stats


def _skeleton_pass(skeletons, writer: _Writer, config: Config, stats: Stats):
    """Instantiate each extracted skeleton on the other tables of the batch."""
    res = _STATE["resources"]
    for skeleton, source_id in skeletons:
        for tid, table in writer.og_tables.items():
            if tid == source_id:
                continue
            found = skeleton_instances(skeleton, table, res, config.limits, stats.diagnostics, IdAllocator())
            for inst in found:
                inst.lineage.flags["skeleton_from"] = source_id
            writer.instances(found)


# -- dataset tools ------------------------------------------------------------------

def read_dataset(path: str | Path, skipped: Counter | None = None) -> Iterator[tuple[str, dict]]:
    """Yield ``(raw line, parsed instance)``; malformed lines are counted, not fatal."""
    skipped = skipped if skipped is not None else Counter()
    for line in _lines(path):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            skipped["malformed_json"] += 1
            continue
        if not isinstance(obj, dict) or obj.get("label") not in (ENTAIL, CONTRADICT) or "table_id" not in obj:
            skipped["malformed_instance"] += 1
            continue
        yield line if line.endswith("\n") else line + "\n", obj


def stats(path: str | Path) -> Stats:
    out = Stats()
    for _, obj in read_dataset(path, out.skipped):
        out.add(obj.get("variant", "OG"), obj["label"])
    return out


def base_table_of(obj: dict) -> str:
    cf = (obj.get("lineage") or {}).get("cf") or {}
    return cf.get("base_table_id") or obj["table_id"]


@dataclass
class SplitReport:
    train: int
    test: int
    train_tables: int
    test_tables: int
    skipped: Counter = field(default_factory=Counter)


def split(path: str | Path, ratio: float, seed: int, train_path: str | Path, test_path: str | Path) -> SplitReport:
    """Partition by base table: a seeded shuffle puts ceil(ratio * tables) tables in test."""
    if not 0 < ratio < 1:
        raise UsageError("ratio must lie strictly between 0 and 1")
    if not 0 <= seed <= MAX_SEED:
        raise UsageError("seed must be a 64-bit unsigned integer")
    skipped = Counter()
    rows = list(read_dataset(path, skipped))
    tables = sorted({base_table_of(obj) for _, obj in rows})
    random.Random(seed).shuffle(tables)
    k = math.ceil(round(ratio * len(tables), 9))
    test_tables = set(tables[:k])
    n_train = n_test = 0
    with _open_out(train_path) as train, _open_out(test_path) as test:
        for line, obj in rows:
            if base_table_of(obj) in test_tables:
                test.write(line)
                n_test += 1
            else:
                train.write(line)
                n_train += 1
    return SplitReport(n_train, n_test, len(tables) - k, k, skipped)


@dataclass
class ValidationReport:
    checked: int = 0
    mismatches: list = field(default_factory=list)    # (id, derived, stored)
    unverifiable: int = 0
    errors: list = field(default_factory=list)        # (id, message)

    def to_json(self) -> dict:
        return {"checked": self.checked, "mismatches": [list(m) for m in self.mismatches],
                "unverifiable": self.unverifiable, "errors": [list(e) for e in self.errors]}


def load_tables(path: str | Path) -> dict[str, Table]:
    raw = {}
    for line in _lines(path):
        obj = json.loads(line)
        raw[str(obj["id"])] = obj
    tables: dict[str, Table] = {}
    for tid, obj in raw.items():
        if "base_table_id" not in obj:
            tables[tid] = parse_table(obj, tid)
    for tid, obj in raw.items():
        og = tables.get(str(obj.get("base_table_id")))
        if "base_table_id" in obj and og is not None:
            tables[tid] = cf_from_json(og, obj)
    return tables


def derive_label(inst: NliInstance, table: Table) -> str | None:
    """Label recomputed from lineage; ``None`` when the lineage carries no oracle."""
    lin = inst.lineage
    flags = lin.flags or {}
    if flags.get("paraphrased") or flags.get("converter") or flags.get("oracle") is False:
        return None
    if lin.op == "sql_execute":
        return derive_sql_label(lin, table) if lin.sql else None
    if not lin.claims and not lin.ranks:
        return None
    if apply_edits(lin.base_text, lin.edits) != inst.hypothesis:
        raise ValueError("lineage does not reconstruct the hypothesis")
    claims, ranks = claims_from_lineage(table, lin)
    return ENTAIL if evaluate(table, claims, ranks).holds else CONTRADICT


def validate(path: str | Path, tables_path: str | Path) -> ValidationReport:
    report = ValidationReport()
    try:
        tables = load_tables(tables_path)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise PipelineIOError(f"cannot load tables from {tables_path}: {exc}") from exc
    for _, obj in read_dataset(path):
        try:
            inst = NliInstance.from_json(obj)
        except (KeyError, TypeError) as exc:
            report.errors.append((obj.get("id"), f"malformed lineage: {exc}"))
            continue
        table = tables.get(inst.table_id)
        if table is None:
            report.errors.append((inst.id, f"table {inst.table_id!r} not found"))
            continue
        try:
            derived = derive_label(inst, table)
        except (RecastError, ValueError, KeyError, IndexError, TypeError) as exc:
            report.errors.append((inst.id, f"{type(exc).__name__}: {exc}"))
            continue
        if derived is None:
            report.unverifiable += 1
            continue
        report.checked += 1
        if derived != inst.label:
            report.mismatches.append((inst.id, derived, inst.label))
    return report
