"""Output records: NLI instances and their generation lineage."""
from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field

from .oracle import Claim, RankClaim
from .tables import Coord, Table

ENTAIL, CONTRADICT = "entail", "contradict"
OG, CF = "OG", "CF"
OPS = ("identity", "substitute_all", "substitute_some", "antonym", "rank_rewrite",
       "cf_regenerate", "sql_execute")
TASKS = ("T2TG", "TQA_short", "TQA_long", "SPT")


@dataclass
class Lineage:
    base_id: str
    op: str
    source_task: str
    base_text: str = ""
    edits: list = field(default_factory=list)          # [start, end, text] against base_text
    substitutions: list = field(default_factory=list)
    claims: list = field(default_factory=list)
    ranks: list = field(default_factory=list)
    sql: dict | None = None
    cf: dict | None = None
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v not in (None, [], {})}
        out.setdefault("base_id", self.base_id)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Lineage":
        names = cls.__dataclass_fields__
        return cls(**{k: v for k, v in obj.items() if k in names})


@dataclass
class NliInstance:
    id: str
    table_id: str
    variant: str
    hypothesis: str
    label: str
    lineage: Lineage

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "table_id": self.table_id,
            "variant": self.variant,
            "hypothesis": self.hypothesis,
            "label": self.label,
            "lineage": self.lineage.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NliInstance":
        return cls(obj["id"], obj["table_id"], obj["variant"], obj["hypothesis"],
                   obj["label"], Lineage.from_json(obj.get("lineage", {})))


class IdAllocator:
    """Provisional ids ``<table_id>:<variant>:<op>:<n>``, unique per allocator."""

    def __init__(self):
        self.counts: Counter = Counter()

    def __call__(self, table_id: str, variant: str, op: str) -> str:
        key = (table_id, variant, op)
        n = self.counts[key]
        self.counts[key] += 1
        return f"{table_id}:{variant}:{op}:{n}"


def apply_edits(text: str, edits) -> str:
    """Splice ``[start, end, replacement]`` edits (non-overlapping) into ``text``."""
    for start, end, rep in sorted(edits, key=lambda e: e[0], reverse=True):
        text = text[:start] + rep + text[end:]
    return text


def claim_to_json(source: Coord, claim: Claim) -> dict:
    out = {"col": claim.col, "source": [source[0], source[1]], "kind": claim.kind,
           "group": claim.group}
    if claim.style:
        out["style"] = list(claim.style)
    if claim.aggregate_row is not None:
        out["aggregate_row"] = claim.aggregate_row
    return out


def rank_to_json(rc: RankClaim) -> dict:
    return {"col": rc.col, "direction": rc.direction, "rank": rc.rank, "group": rc.group}


def claims_from_lineage(table: Table, lineage: Lineage) -> tuple[list[Claim], list[RankClaim]]:
    """Rebuild oracle claims, reading asserted values out of ``table``."""
    claims = []
    for c in lineage.claims:
        r, col = c["source"]
        claims.append(Claim(
            c["col"], table.cells[r][col], c.get("kind", "exact"), tuple(c.get("style", ())),
            c.get("group", 0), c.get("aggregate_row"),
        ))
    ranks = [RankClaim(r["col"], r["direction"], r["rank"], r.get("group", 0)) for r in lineage.ranks]
    return claims, ranks
