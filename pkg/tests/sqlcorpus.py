"""Random single-table queries and a brute-force evaluator written from scratch."""
from __future__ import annotations

import math
import random
import re

WORDS = ["red", "blue", "green", "amber", "teal", "Red", "BLUE"]
NUM_RE = re.compile(r"^-?\d+(?:\.\d+)?$")
ISO_RE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")


def random_table(rng: random.Random) -> tuple[dict, list[str]]:
    ncols = rng.randint(1, 5)
    kinds = [rng.choice(["text", "num", "num", "date"]) for _ in range(ncols)]
    headers = [f"c{i}" for i in range(ncols)]
    rows = []
    for _ in range(rng.randint(0, 8)):
        row = []
        for k in kinds:
            if k == "text":
                row.append(rng.choice(WORDS))
            elif k == "num":
                row.append(rng.choice([str(rng.randint(-3, 9)), f"{rng.randint(0, 9)}.5"]))
            else:
                row.append(f"20{rng.randint(0, 2):02d}-0{rng.randint(1, 3)}-1{rng.randint(0, 2)}")
        rows.append(row)
    return {"headers": headers, "rows": rows}, kinds


def random_query(rng: random.Random, raw: dict, col_types: list[str]) -> str:
    """Query text in the subset grammar, type-correct for the typed table."""
    n = len(col_types)
    numeric = [i for i, t in enumerate(col_types) if t == "number"]
    ordered = [i for i, t in enumerate(col_types) if t in ("number", "date")]
    sel = rng.randrange(n)
    aggs = ["", "", "count"] + (["min", "max", "sum", "avg"] if col_types[sel] == "number" else [])
    agg = rng.choice(aggs)
    text = f"select {agg}(c{sel})" if agg else f"select c{sel}"
    text += " from T"
    conds = []
    for _ in range(rng.randint(0, 2)):
        c = rng.randrange(n)
        if numeric and rng.random() < 0.2:
            op = "=" if c not in numeric else rng.choice(["=", "<", ">="])
            if c not in numeric and op != "=":
                op = "="
            if c in numeric or op == "=":
                conds.append(f"c{c} {op} {rng.choice(['max', 'min'])}(c{rng.choice(numeric)})")
                continue
        ops = ["=", "!="] + (["<", "<=", ">", ">="] if c in ordered else [])
        op = rng.choice(ops)
        column = [r[c] for r in raw["rows"]]
        if c in ordered and op not in ("=", "!="):
            pool = [v for v in column if (NUM_RE.match(v) if col_types[c] == "number" else ISO_RE.match(v))]
            if not pool:
                continue
            value = rng.choice(pool)
        else:
            value = rng.choice(column) if column and rng.random() < 0.8 else rng.choice(WORDS + ["4"])
        lit = value if NUM_RE.match(value) else "'" + value + "'"
        conds.append(f"c{c} {op} {lit}")
    if conds:
        text += " where " + " and ".join(conds)
    return text


# -- brute force -----------------------------------------------------------------

_Q = re.compile(r"^select (?:(\w+)\()?c(\d+)\)? from T(?: where (.*))?$")
_C = re.compile(r"^c(\d+) (=|!=|<=|>=|<|>) (?:(max|min)\(c(\d+)\)|'([^']*)'|(\S+))$")


def _val(raw: str):
    if NUM_RE.match(raw):
        return ("num", float(raw))
    m = ISO_RE.match(raw)
    if m:
        return ("date", tuple(int(x) for x in m.groups()))
    return ("text", raw.casefold())


def _cmp(a, op, b) -> bool:
    if a[0] != b[0]:
        if op in ("=", "!="):
            return op == "!="
        return False
    x, y = a[1], b[1]
    if a[0] == "num" and math.isclose(x, y, rel_tol=1e-9):
        x = y
    return {"=": x == y, "!=": x != y, "<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op]


def brute_force(query: str, rows: list[list[str]], body: list[int]):
    """('error', None) | ('values', [raw...]) | ('scalar', float)."""
    agg, sel, where = _Q.match(query).groups()
    sel = int(sel)
    conds = []
    for part in (where.split(" and ") if where else []):
        c, op, cagg, ccol, quoted, bare = _C.match(part).groups()
        if cagg:
            nums = [float(rows[r][int(ccol)]) for r in body if NUM_RE.match(rows[r][int(ccol)])]
            rhs = ("num", (max if cagg == "max" else min)(nums)) if nums else None
        else:
            rhs = _val(quoted if quoted is not None else bare)
        conds.append((int(c), op, rhs))
    hits = [r for r in body
            if all(rhs is not None and _cmp(_val(rows[r][c]), op, rhs) for c, op, rhs in conds)]
    picked = [rows[r][sel] for r in hits]
    if agg == "count":
        return "scalar", float(len(picked))
    if agg:
        nums = [float(v) for v in picked if NUM_RE.match(v)]
        if not nums:
            return "error", None
        return "scalar", {"min": min, "max": max, "sum": math.fsum,
                          "avg": lambda xs: math.fsum(xs) / len(xs)}[agg](nums)
    return "values", picked
