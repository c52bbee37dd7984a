"""Counterfactual tables: swap two cells so a contradiction turns true."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Sequence

from .align import align_all, normalize_tokens
from .errors import CounterfactualError
from .instances import CF, CONTRADICT, IdAllocator, NliInstance, claims_from_lineage
from .lexicons import AntonymLexicon
from .oracle import evaluate
from .perturb import (
    DEFAULT_MAX_CONTRADICTIONS, DEFAULT_MAX_ENTAILMENTS,
    antonym_contradictions, base_instance, generate_contradictions, generate_entailments,
)
from .tables import NUMBER, Coord, Table


@dataclass(frozen=True)
class CfSwap:
    a: Coord
    b: Coord
    column: int

    def __post_init__(self):
        if not (self.a.col == self.b.col == self.column):
            raise ValueError("swapped cells must share the swap column")

    def to_json(self) -> dict:
        return {"col": self.column, "row_a": self.a.row, "row_b": self.b.row}

    @classmethod
    def from_json(cls, obj: dict) -> "CfSwap":
        col = obj["col"]
        return cls(Coord(obj["row_a"], col), Coord(obj["row_b"], col), col)


@dataclass(frozen=True)
class CfTable:
    base_table_id: str
    table: Table
    swaps: tuple[CfSwap, ...]
    seed_contradiction_id: str

    def to_json(self) -> dict:
        obj = self.table.to_json()
        obj.update(variant=CF, base_table_id=self.base_table_id,
                   swaps=[s.to_json() for s in self.swaps],
                   seed=self.seed_contradiction_id)
        return obj


@dataclass
class CfLimits:
    entailments: int | None = DEFAULT_MAX_ENTAILMENTS
    contradictions: int | None = DEFAULT_MAX_CONTRADICTIONS
    antonyms: int | None = DEFAULT_MAX_CONTRADICTIONS


def cf_table_id(table_id: str, swaps: Sequence[CfSwap]) -> str:
    return table_id + "".join(f"~cf{s.column}.{s.a.row}.{s.b.row}" for s in swaps)


def apply_swaps(table: Table, swaps: Sequence[CfSwap], table_id: str | None = None) -> Table:
    """Exchange cell contents; types and aggregate rows are carried over."""
    grid = [list(row) for row in table.cells]
    for s in swaps:
        (ra, c), (rb, _) = s.a, s.b
        grid[ra][c], grid[rb][c] = grid[rb][c], grid[ra][c]
    return replace(table, id=table.id if table_id is None else table_id,
                   cells=tuple(tuple(row) for row in grid))


def cf_from_json(og: Table, obj: dict) -> Table:
    """Rebuild a serialized CF table from its original."""
    swaps = [CfSwap.from_json(s) for s in obj.get("swaps", [])]
    return apply_swaps(og, swaps, obj.get("id"))


def check_swap(table: Table, swap: CfSwap) -> None:
    for c in (swap.a, swap.b):
        if not (0 <= c.row < table.row_count and 0 <= c.col < table.col_count):
            raise CounterfactualError(f"swap cell {tuple(c)} outside table")
        if c.row in table.aggregate_rows:
            raise CounterfactualError(f"cell {tuple(c)} is an aggregate and cannot be swapped")
    if swap.a.row == swap.b.row:
        raise CounterfactualError("swap needs two distinct rows")
    if table.aggregate_rows and table.col_types[swap.column] == NUMBER:
        raise CounterfactualError(
            f"column {table.headers[swap.column]!r} feeds an aggregate row; swapping it "
            "would break the total"
        )


def build_cf_table(table: Table, contradiction: NliInstance) -> CfTable:
    lineage = contradiction.lineage
    if contradiction.label != CONTRADICT or lineage.op != "substitute_some":
        raise CounterfactualError("only substitution contradictions can seed a CF table")
    if len(lineage.substitutions) != 1:
        raise CounterfactualError("multi-substitution contradictions are not supported")
    if not lineage.claims:
        raise CounterfactualError("contradiction carries no grounded claims")
    sub = lineage.substitutions[0]
    x, z = Coord(*sub["cell"]), Coord(*sub["replacement"])
    swap = CfSwap(x, z, x.col)
    check_swap(table, swap)

    cf = apply_swaps(table, [swap], cf_table_id(table.id, [swap]))
    # Claims hold OG values: the contradiction's values, and the base's (with
    # the substituted claim pointing back at the original cell).
    contra_claims, ranks = claims_from_lineage(table, lineage)
    k = sub["alignment"]
    base_lineage = replace(lineage, claims=[
        dict(c, source=list(x)) if i == k else c for i, c in enumerate(lineage.claims)
    ])
    base_claims, _ = claims_from_lineage(table, base_lineage)
    if not evaluate(cf, contra_claims, ranks).holds:
        raise CounterfactualError("swap does not make the contradiction true")
    if evaluate(cf, base_claims, ranks).holds:
        raise CounterfactualError("original base entailment still holds on the CF table")
    return CfTable(table.id, cf, (swap,), contradiction.id)


def regenerate_hypotheses(
    cf: CfTable,
    seed_text: str,
    relevant_cells: Sequence[Sequence[int]],
    limits: CfLimits | None = None,
    *,
    lexicon: AntonymLexicon | None = None,
    abbreviations: dict | None = None,
    source_task: str = "T2TG",
    diag: Counter | None = None,
    ids: IdAllocator | None = None,
) -> list[NliInstance]:
    """Treat the (now true) seed contradiction as the CF base and rerun perturbation."""
    limits = limits or CfLimits()
    diag = diag if diag is not None else Counter()
    table = cf.table
    aset = align_all(table, relevant_cells, normalize_tokens(seed_text), abbreviations)
    provenance = {"table_id": table.id, "base_table_id": cf.base_table_id,
                  "seed": cf.seed_contradiction_id, "swaps": [s.to_json() for s in cf.swaps]}
    ids = ids or IdAllocator()
    base = base_instance(table, aset, source_task=source_task, variant=CF, op="cf_regenerate", ids=ids)
    kw = dict(base_id=base.id, source_task=source_task, variant=CF, diag=diag, ids=ids)
    out = [base]
    if aset.complete:
        out += generate_entailments(table, aset, limits.entailments, **kw)
    out += generate_contradictions(table, aset, limits.contradictions, **kw)
    if lexicon is not None:
        out += antonym_contradictions(aset.base, lexicon, limits.antonyms, table=table, aset=aset, **kw)
    for inst in out:
        inst.lineage.cf = dict(provenance)
    return out
