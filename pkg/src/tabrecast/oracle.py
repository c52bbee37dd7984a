"""Tuple-match truth oracle.

A hypothesis grounded in a table is reduced to *claims*.  A value claim says
"column ``col`` holds ``value``", compared through the surface form the
hypothesis uses for it (a year-only date mention only asserts the year).  A
rank claim says "this row has dense rank ``rank`` in ``col``".  Claims are
grouped by the table row that grounded them; a group holds iff one body row
satisfies all of its claims.  Claims about aggregate cells are checked against
the aggregate cell itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .tables import DATE, NUMBER, CellValue, Coord, Table, dense_rank, labeled_aggregate_rows

NUMERIC_KINDS = frozenset({"exact", "numeric_word", "ordinal_word", "partial_token",
                           "possessive", "abbreviation"})


@dataclass(frozen=True)
class Claim:
    col: int
    value: CellValue
    kind: str = "exact"
    style: tuple[str, ...] = ()
    group: int = 0
    aggregate_row: int | None = None


@dataclass(frozen=True)
class RankClaim:
    col: int
    direction: str
    rank: int
    group: int = 0


def claim_key(kind: str, style: Sequence[str], cell: CellValue):
    """Comparison key of a cell as a hypothesis of this kind would mention it."""
    if cell.is_empty:
        return ("empty",)
    if kind == "date_component":
        if cell.kind != DATE:
            return ("text", cell.text_key)
        year, month, day = cell.date
        parts = {"year": year, "month": month, "day": day}
        return ("date",) + tuple(parts[c] for c in style)
    if cell.kind == NUMBER and kind in NUMERIC_KINDS:
        return ("num", _canonical_number(cell.number))
    return ("text", cell.text_key)


def _canonical_number(x: float) -> float:
    # 1e-9 relative tolerance is honoured by rounding to 12 significant digits.
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def row_satisfies(table: Table, row: int, claims: Iterable[Claim], ranks: Iterable[RankClaim] = ()) -> bool:
    cells = table.cells[row]
    for c in claims:
        if claim_key(c.kind, c.style, cells[c.col]) != claim_key(c.kind, c.style, c.value):
            return False
    for rc in ranks:
        if dense_rank(table, row, rc.col, rc.direction) != rc.rank:
            return False
    return True


def matching_rows(table: Table, claims: Sequence[Claim], ranks: Sequence[RankClaim] = ()) -> list[int]:
    return [r for r in table.body_rows() if row_satisfies(table, r, claims, ranks)]


def guard_accidental_entailment(table: Table, pairs: Sequence[tuple[int, CellValue]]) -> bool:
    """True (accept as a contradiction) iff no single body row carries every pair.

    An empty tuple is vacuously true of every table, so it is rejected.
    """
    if not pairs:
        return False
    claims = [Claim(col, value) for col, value in pairs]
    return not matching_rows(table, claims)


@dataclass
class Verdict:
    holds: bool
    failing_groups: list[int] = field(default_factory=list)
    failing_aggregates: list[int] = field(default_factory=list)


def evaluate(table: Table, claims: Sequence[Claim], ranks: Sequence[RankClaim] = ()) -> Verdict:
    """Truth of a full claim set against ``table``."""
    verdict = Verdict(True)
    groups: dict[int, tuple[list, list]] = {}
    for c in claims:
        if c.aggregate_row is not None:
            cell = table.cells[c.aggregate_row][c.col]
            if claim_key(c.kind, c.style, cell) != claim_key(c.kind, c.style, c.value):
                verdict.failing_aggregates.append(c.aggregate_row)
            continue
        groups.setdefault(c.group, ([], []))[0].append(c)
    for rc in ranks:
        groups.setdefault(rc.group, ([], []))[1].append(rc)
    for g, (gc, gr) in sorted(groups.items()):
        if not matching_rows(table, gc, gr):
            verdict.failing_groups.append(g)
    verdict.holds = not verdict.failing_groups and not verdict.failing_aggregates
    return verdict


def admits_row_reading(table: Table, claims: Sequence[Claim], ranks: Sequence[RankClaim] = ()) -> bool:
    """True if the claims hold once unlabeled aggregate rows are read as data rows.

    A row flagged only because its numbers sum the others may still be an
    ordinary record, so a contradiction must be false under this reading too.
    """
    labeled = labeled_aggregate_rows(table)
    loose = set(table.aggregate_rows) - labeled
    domain = table.body_rows() + sorted(loose)
    groups: dict = {}
    for c in claims:
        if c.aggregate_row is not None and c.aggregate_row in labeled:
            cell = table.cells[c.aggregate_row][c.col]
            if claim_key(c.kind, c.style, cell) != claim_key(c.kind, c.style, c.value):
                return False
            continue
        key = ("agg", c.aggregate_row) if c.aggregate_row is not None else c.group
        groups.setdefault(key, ([], []))[0].append(c)
    for rc in ranks:
        groups.setdefault(rc.group, ([], []))[1].append(rc)
    for gc, gr in groups.values():
        if not any(row_satisfies(table, r, gc, gr) for r in domain):
            return False
    return True


def contradiction_holds(table: Table, claims: Sequence[Claim], ranks: Sequence[RankClaim] = ()) -> bool:
    """A candidate contradiction is kept only if no reading of the table makes it true."""
    return not evaluate(table, claims, ranks).holds and not admits_row_reading(table, claims, ranks)


def resolve(table: Table, source: Coord) -> CellValue:
    return table.cells[source[0]][source[1]]
