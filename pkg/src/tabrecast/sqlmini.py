"""A small SQL subset over a single table: parse, execute, perturb, skeletonize.

Grammar (keywords case-insensitive)::

    SELECT [agg(]col[)] FROM T [WHERE col op value {AND col op value}]

``value`` is a quoted or bare literal, or ``min(col)`` / ``max(col)``.
"""
from __future__ import annotations

import difflib
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Union

from .align import normalize_tokens
from .errors import (
    ColumnResolutionError, EmptyResultError, QueryTypeError, SkeletonError, SqlError,
    UnsupportedSyntaxError,
)
from .instances import CONTRADICT, ENTAIL, OG, IdAllocator, Lineage, NliInstance
from .tables import (
    DATE, NUMBER, TEXT, CellValue, Coord, Table, candidate_pool, format_number, parse_cell,
)
from .text import depluralize, match_case, norm_tokens

AGGS = ("min", "max", "count", "sum", "avg")
COLAGGS = ("min", "max")
OPS = ("=", "!=", "<", "<=", ">", ">=")
ORDERING_OPS = frozenset({"<", "<=", ">", ">="})
REL_TOL = 1e-9
SCALAR, LIST = "scalar", "list"

_UNSUPPORTED_RE = re.compile(
    r"\b(or|join|order\s+by|group\s+by|limit|having|union|intersect|except|distinct|as)\b",
    re.IGNORECASE,
)
_OP_RE = re.compile(r"\s*(!=|<>|<=|>=|=|<|>)\s*")
_STOP_RE = re.compile(r"\s+(?:order\s+by|group\s+by|limit|having|union)\b", re.IGNORECASE)


@dataclass(frozen=True)
class Literal:
    value: CellValue

    @classmethod
    def of(cls, raw) -> "Literal":
        return cls(parse_cell(str(raw)))


@dataclass(frozen=True)
class ColAgg:
    agg: str
    col: int


@dataclass(frozen=True)
class Condition:
    col: int
    op: str
    rhs: Union[Literal, ColAgg]


@dataclass(frozen=True)
class Query:
    select_col: int
    agg: str | None = None
    conditions: tuple[Condition, ...] = ()

    def columns(self) -> list[int]:
        """Columns in order of first appearance."""
        seen = [self.select_col]
        for c in self.conditions:
            for col in (c.col, c.rhs.col if isinstance(c.rhs, ColAgg) else None):
                if col is not None and col not in seen:
                    seen.append(col)
        return seen


@dataclass(frozen=True)
class Answer:
    kind: str
    values: tuple[CellValue, ...]

    @property
    def raws(self) -> list[str]:
        return [v.raw for v in self.values]


# -- validation ---------------------------------------------------------------

def check_query(q: Query, table: Table) -> Query:
    n = table.col_count
    for col in q.columns():
        if not 0 <= col < n:
            raise QueryTypeError(f"column index {col} outside table")
    if q.agg is not None:
        if q.agg not in AGGS:
            raise QueryTypeError(f"unknown aggregate {q.agg!r}")
        if q.agg != "count" and table.col_types[q.select_col] != NUMBER:
            raise QueryTypeError(f"{q.agg} needs a numeric column, got {table.headers[q.select_col]!r}")
    for c in q.conditions:
        if c.op not in OPS:
            raise QueryTypeError(f"unknown operator {c.op!r}")
        ctype = table.col_types[c.col]
        if isinstance(c.rhs, ColAgg):
            if c.rhs.agg not in COLAGGS:
                raise QueryTypeError(f"{c.rhs.agg} is not allowed on the right-hand side")
            if table.col_types[c.rhs.col] != NUMBER:
                raise QueryTypeError(f"{c.rhs.agg}() needs a numeric column")
            if c.op in ORDERING_OPS and ctype != NUMBER:
                raise QueryTypeError(f"ordering comparison on non-numeric column {table.headers[c.col]!r}")
        elif c.op in ORDERING_OPS:
            if ctype not in (NUMBER, DATE):
                raise QueryTypeError(f"ordering comparison on {ctype} column {table.headers[c.col]!r}")
            if c.rhs.value.kind != ctype:
                raise QueryTypeError(f"literal {c.rhs.value.raw!r} is not a {ctype}")
    return q


# -- parsing ------------------------------------------------------------------

def _header_patterns(table: Table):
    pats = []
    for i, h in enumerate(table.headers):
        body = r"\s+".join(re.escape(w) for w in h.split())
        tail = r"(?![\w])" if h.strip()[-1:].isalnum() or h.strip()[-1:] == "_" else ""
        pats.append((i, re.compile(body + tail, re.IGNORECASE)))
    return pats


class _Cursor:
    def __init__(self, text: str, table: Table):
        self.text = text
        self.pos = 0
        self.table = table
        self.headers = _header_patterns(table)

    def rest(self) -> str:
        return self.text[self.pos:]

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.ws()
        return self.text[self.pos:].strip() in ("", ";")

    def keyword(self, word: str) -> bool:
        self.ws()
        m = re.compile(re.escape(word) + r"\b", re.IGNORECASE).match(self.text, self.pos)
        if m:
            self.pos = m.end()
        return bool(m)

    def expect(self, word: str):
        if not self.keyword(word):
            self.fail(f"expected {word.upper()}")

    def fail(self, message: str):
        rest = self.rest()
        m = _UNSUPPORTED_RE.search(_mask_quotes(rest))
        if m or re.match(r"\s*\(\s*select\b", rest, re.IGNORECASE):
            word = m.group(0) if m else "nested SELECT"
            raise UnsupportedSyntaxError(f"unsupported construct {word.upper()!r}")
        raise SqlError(f"{message} at {rest[:30]!r}")

    def match_column(self, pos: int | None = None):
        pos = self.pos if pos is None else pos
        best = None
        for i, pat in self.headers:
            m = pat.match(self.text, pos)
            if m and (best is None or m.end() > best[1]):
                best = (i, m.end())
        return best

    def column(self) -> int:
        self.ws()
        if self.pos < len(self.text) and self.text[self.pos] in "\"`":
            q = self.text[self.pos]
            end = self.text.find(q, self.pos + 1)
            if end < 0:
                self.fail("unterminated column name")
            name = self.text[self.pos + 1:end]
            for i, h in enumerate(self.table.headers):
                if " ".join(h.split()).casefold() == " ".join(name.split()).casefold():
                    self.pos = end + 1
                    return i
            self._unresolved(name)
        hit = self.match_column()
        if hit is None:
            m = re.compile(r"[^\s=<>!()]+").match(self.text, self.pos)
            if m is None:
                self.fail("expected a column name")
            if _UNSUPPORTED_RE.fullmatch(m.group(0)) or m.group(0).casefold() == "select":
                self.fail("expected a column name")
            self._unresolved(m.group(0))
        self.pos = hit[1]
        return hit[0]

    def _unresolved(self, name: str):
        headers = list(self.table.headers)
        close = difflib.get_close_matches(name, headers, n=3, cutoff=0.4)
        lowered = {h.casefold(): h for h in headers}
        close += [lowered[c] for c in difflib.get_close_matches(name.casefold(), list(lowered), n=3, cutoff=0.4)
                  if lowered[c] not in close]
        raise ColumnResolutionError(name, close or headers)

    def agg_open(self, allowed) -> str | None:
        self.ws()
        m = re.compile(r"([a-z]+)\s*\(", re.IGNORECASE).match(self.text, self.pos)
        if m and m.group(1).casefold() in allowed:
            self.pos = m.end()
            return m.group(1).casefold()
        if m and m.group(1).casefold() in AGGS:
            raise UnsupportedSyntaxError(f"{m.group(1)}() is not allowed here")
        if m and m.group(1).casefold() == "select":
            raise UnsupportedSyntaxError("unsupported construct 'nested SELECT'")
        return None

    def close(self):
        self.ws()
        if not self.text.startswith(")", self.pos):
            self.fail("expected ')'")
        self.pos += 1

    def op(self) -> str:
        m = _OP_RE.match(self.text, self.pos)
        if not m:
            self.fail("expected a comparison operator")
        self.pos = m.end()
        return "!=" if m.group(1) == "<>" else m.group(1)

    def value(self):
        self.ws()
        if self.pos >= len(self.text):
            self.fail("expected a value")
        ch = self.text[self.pos]
        if ch in "'\"":
            return Literal(parse_cell(self._quoted(ch)))
        if re.match(r"\(\s*select\b", self.rest(), re.IGNORECASE):
            raise UnsupportedSyntaxError("unsupported construct 'nested SELECT'")
        agg = self.agg_open(COLAGGS)
        if agg is not None:
            col = self.column()
            self.close()
            return ColAgg(agg, col)
        return Literal(parse_cell(self._bare()))

    def _quoted(self, q: str) -> str:
        i = self.pos + 1
        out = []
        while i < len(self.text):
            if self.text[i] == q:
                if self.text.startswith(q * 2, i):
                    out.append(q)
                    i += 2
                    continue
                self.pos = i + 1
                return "".join(out)
            out.append(self.text[i])
            i += 1
        self.fail("unterminated string literal")

    def _bare(self) -> str:
        # A bare literal runs to the end, or up to an AND/OR that starts a new
        # "column op" comparison, or up to a clause keyword.
        start = self.pos
        end = len(self.text)
        stop = _STOP_RE.search(self.text, start)
        if stop:
            end = stop.start()
        for m in re.compile(r"\s+(and|or)\s+", re.IGNORECASE).finditer(self.text, start, end):
            hit = self.match_column(m.end())
            if hit and _OP_RE.match(self.text, hit[1]):
                end = m.start()
                break
        raw = self.text[start:end].strip()
        if raw.endswith(";"):
            raw = raw[:-1].rstrip()
        if not raw:
            self.fail("expected a value")
        self.pos = start + len(self.text[start:end].rstrip())
        if self.text[self.pos - 1:self.pos] == ";" and raw:
            self.pos -= 1
        return raw


def _mask_quotes(text: str) -> str:
    return re.sub(r"'(?:[^']|'')*'|\"(?:[^\"]|\"\")*\"", lambda m: " " * len(m.group(0)), text)


def parse_sql(text: str, table: Table) -> Query:
    masked = _mask_quotes(text)
    if len(re.findall(r"\bselect\b", masked, re.IGNORECASE)) > 1:
        raise UnsupportedSyntaxError("unsupported construct 'nested SELECT'")
    cur = _Cursor(text, table)
    cur.expect("select")
    agg = cur.agg_open(AGGS)
    col = cur.column()
    if agg is not None:
        cur.close()
    cur.expect("from")
    cur.ws()
    if re.match(r"\(", cur.rest()):
        cur.fail("expected a table name")
    m = re.compile(r"[^\s;]+").match(text, cur.pos)
    if m is None:
        cur.fail("expected a table name")
    cur.pos = m.end()
    conditions = []
    if cur.keyword("where"):
        while True:
            ccol = cur.column()
            op = cur.op()
            conditions.append(Condition(ccol, op, cur.value()))
            if not cur.keyword("and"):
                break
    if not cur.at_end():
        cur.fail("unexpected trailing input")
    return check_query(Query(col, agg, tuple(conditions)), table)


# -- rendering ----------------------------------------------------------------

_BARE_NUMBER = re.compile(r"[^\s'\"();]+")


def _render_literal(value: CellValue) -> str:
    raw = value.raw
    if value.kind == NUMBER and _BARE_NUMBER.fullmatch(raw) and not _UNSUPPORTED_RE.fullmatch(raw) \
            and raw.casefold() != "and":
        return raw
    return "'" + raw.replace("'", "''") + "'"


def render_sql(q: Query, table: Table | None = None, names: Sequence[str] | None = None) -> str:
    if names is None:
        if table is None:
            raise ValueError("rendering needs a table or column names")
        names = table.headers
    sel = names[q.select_col]
    if q.agg:
        sel = f"{q.agg}({sel})"
    out = f"select {sel} from T"
    conds = []
    for c in q.conditions:
        rhs = f"{c.rhs.agg}({names[c.rhs.col]})" if isinstance(c.rhs, ColAgg) else _render_literal(c.rhs.value)
        conds.append(f"{names[c.col]} {c.op} {rhs}")
    if conds:
        out += " where " + " and ".join(conds)
    return out


# -- execution ----------------------------------------------------------------

def _number_cmp(a: float, b: float) -> int:
    if math.isclose(a, b, rel_tol=REL_TOL):
        return 0
    return -1 if a < b else 1


def _date_key(d) -> tuple:
    return tuple(x if x is not None else 0 for x in d)


def compare(cell: CellValue, op: str, other: CellValue) -> bool:
    """Truth of ``cell op other``; empty cells never satisfy a condition."""
    if cell.is_empty or other.is_empty:
        return False
    if cell.kind == NUMBER and other.kind == NUMBER:
        c = _number_cmp(cell.number, other.number)
    elif cell.kind == DATE and other.kind == DATE:
        a, b = _date_key(cell.date), _date_key(other.date)
        c = (a > b) - (a < b)
    elif op in ORDERING_OPS:
        return False
    else:
        c = 0 if cell.text_key == other.text_key else 1
    return {"=": c == 0, "!=": c != 0, "<": c < 0, "<=": c <= 0, ">": c > 0, ">=": c >= 0}[op]


def _number_cell(x: float) -> CellValue:
    return CellValue(NUMBER, format_number(x), float(x), None)


def column_aggregate(table: Table, agg: str, col: int) -> CellValue | None:
    cells = [table.cells[r][col] for r in table.body_rows() if table.cells[r][col].kind == NUMBER]
    if not cells:
        return None
    pick = max if agg == "max" else min
    return pick(cells, key=lambda c: c.number)


def matching_rows(q: Query, table: Table) -> list[int]:
    rhs = {}
    for i, c in enumerate(q.conditions):
        if isinstance(c.rhs, ColAgg):
            rhs[i] = column_aggregate(table, c.rhs.agg, c.rhs.col)
        else:
            rhs[i] = c.rhs.value
    rows = []
    for r in table.body_rows():
        ok = True
        for i, c in enumerate(q.conditions):
            if rhs[i] is None or not compare(table.cells[r][c.col], c.op, rhs[i]):
                ok = False
                break
        if ok:
            rows.append(r)
    return rows


def execute(q: Query, table: Table) -> Answer:
    check_query(q, table)
    rows = matching_rows(q, table)
    cells = [table.cells[r][q.select_col] for r in rows]
    if q.agg == "count":
        return Answer(SCALAR, (_number_cell(sum(not c.is_empty for c in cells)),))
    if q.agg is not None:
        nums = [c for c in cells if c.kind == NUMBER]
        if not nums:
            raise EmptyResultError(f"{q.agg} over zero rows")
        if q.agg in ("min", "max"):
            pick = max if q.agg == "max" else min
            return Answer(SCALAR, (pick(nums, key=lambda c: c.number),))
        total = math.fsum(c.number for c in nums)
        return Answer(SCALAR, (_number_cell(total if q.agg == "sum" else total / len(nums)),))
    values = tuple(c for c in cells if not c.is_empty)
    return Answer(SCALAR if len(values) == 1 else LIST, values)


def answer_contains(answer: Answer, value: CellValue) -> bool:
    return any(compare(v, "=", value) for v in answer.values)


# -- perturbation ---------------------------------------------------------------

def _find_span(question: str, raw: str) -> tuple[int, int] | None:
    hyp = normalize_tokens(question)
    needle = norm_tokens(raw)
    words = hyp.words
    for i in range(len(words) - len(needle) + 1):
        if needle and words[i:i + len(needle)] == needle:
            return hyp.char_span((i, i + len(needle)))
    return None


def _literal_pool(table: Table, col: int, value: CellValue) -> list[Coord]:
    for r in table.body_rows():
        if compare(table.cells[r][col], "=", value):
            return candidate_pool(table, Coord(r, col))
    return [Coord(r, col) for r in table.body_rows() if table.conforms((r, col))]


def perturb_query(
    q: Query,
    question: str,
    table: Table,
    limit: int | None = None,
    diag: Counter | None = None,
) -> list[tuple[Query, str]]:
    diag = diag if diag is not None else Counter()
    if limit is not None and limit <= 0:
        return []
    literal_idx = [i for i, c in enumerate(q.conditions) if isinstance(c.rhs, Literal)]
    spans = {}
    for i in literal_idx:
        span = _find_span(question, q.conditions[i].rhs.value.raw)
        if span is None:
            diag["sql_literal_not_in_question"] += 1
            return []
        spans[i] = span
    out = []
    seen = {question}
    for i in literal_idx:
        cond = q.conditions[i]
        a, b = spans[i]
        tried = [cond.rhs.value]
        for coord in _literal_pool(table, cond.col, cond.rhs.value):
            cand = table.cell(coord)
            if any(compare(cand, "=", t) or cand.text_key == t.text_key for t in tried):
                continue
            tried.append(cand)
            conds = list(q.conditions)
            conds[i] = Condition(cond.col, cond.op, Literal(cand))
            nq = Query(q.select_col, q.agg, tuple(conds))
            try:
                check_query(nq, table)
                ans = execute(nq, table)
            except SqlError:
                diag["sql_perturbation_invalid"] += 1
                continue
            if not ans.values or (nq.agg == "count" and ans.values[0].number == 0):
                diag["sql_perturbation_empty"] += 1
                continue
            nquestion = question[:a] + match_case(question[a:b], cand.raw) + question[b:]
            if nquestion in seen:
                continue
            seen.add(nquestion)
            out.append((nq, nquestion))
            if limit is not None and len(out) >= limit:
                return out
    return out


# -- question to statement ------------------------------------------------------

_COPULAS = frozenset({"is", "was", "are", "were"})
_WH_NP = frozenset({"which", "what"})


def declarativize(question: str, answer: str, table: Table | None = None) -> str | None:
    """Template rewrite of simple WH questions: put the answer where the WH phrase was.

    Handles "Which/What <noun phrase> <predicate>?", "Who <predicate>?" and
    "What/Who is <noun phrase>?".  Anything else returns ``None``.
    """
    q = question.strip().rstrip("?").strip()
    words = q.split()
    if len(words) < 2 or not answer.strip():
        return None
    wh = words[0].casefold()
    rest = words[1:]
    if wh in _WH_NP | {"who"} and rest[0].casefold() in _COPULAS and len(rest) > 1:
        subject = " ".join(rest[1:])
        return _sentence(f"{subject} {rest[0].casefold()} {answer}")
    if wh == "who":
        return _sentence(f"{answer} {' '.join(rest)}")
    if wh not in _WH_NP or len(rest) < 2:
        return None
    np_len = _noun_phrase_length(rest, table)
    predicate = rest[np_len:]
    if not predicate:
        return None
    return _sentence(f"{answer} {' '.join(predicate)}")


def _noun_phrase_length(words: Sequence[str], table: Table | None) -> int:
    best = 1
    if table is not None:
        keys = [[depluralize(t) for t in norm_tokens(h)] for h in table.headers]
        lowered = [depluralize(t) for t in norm_tokens(" ".join(words))]
        for k in keys:
            if k and lowered[:len(k)] == k and len(k) < len(words):
                best = max(best, len(k))
    return best


def _sentence(text: str) -> str:
    text = " ".join(text.split())
    return text[:1].upper() + text[1:] + "."


class TemplateConverter:
    """Model-free converter: template declarativizer and identity paraphrase."""

    name = "template"

    def qa2d(self, question: str, answer: str, table: Table | None = None) -> str | None:
        return declarativize(question, answer, table)

    def paraphrase(self, text: str) -> str:
        return text


# -- skeletons ------------------------------------------------------------------

_SLOT_SUFFIX = {TEXT: "text", NUMBER: "num", DATE: "date"}


@dataclass(frozen=True)
class Skeleton:
    question_template: str
    query_template: Query                 # column indices are slot indices
    slots: tuple[tuple[str, str], ...]    # (slot id, type)

    @property
    def slot_names(self) -> list[str]:
        return [f"{sid}_{_SLOT_SUFFIX[t]}" for sid, t in self.slots]

    def query_text(self) -> str:
        return render_sql(self.query_template, names=self.slot_names)


def _remap(q: Query, mapping: dict[int, int]) -> Query:
    conds = []
    for c in q.conditions:
        rhs = ColAgg(c.rhs.agg, mapping[c.rhs.col]) if isinstance(c.rhs, ColAgg) else c.rhs
        conds.append(Condition(mapping[c.col], c.op, rhs))
    return Query(mapping[q.select_col], q.agg, tuple(conds))


def _header_window(question: str, header: str) -> tuple[int, int] | None:
    hyp = normalize_tokens(question)
    key = [depluralize(t) for t in norm_tokens(header)]
    words = [depluralize(w) for w in hyp.words]
    for i in range(len(words) - len(key) + 1):
        if key and words[i:i + len(key)] == key:
            return hyp.char_span((i, i + len(key)))
    return None


def extract_skeleton(q: Query, question: str, table: Table) -> Skeleton:
    if any(isinstance(c.rhs, Literal) for c in q.conditions):
        raise SkeletonError("skeletons only cover column-only conditions")
    cols = q.columns()
    slots, windows = [], []
    for i, col in enumerate(cols):
        ctype = table.col_types[col]
        if ctype not in _SLOT_SUFFIX:
            raise SkeletonError(f"no slot type for column {table.headers[col]!r}")
        window = _header_window(question, table.headers[col])
        if window is None:
            raise SkeletonError(f"column {table.headers[col]!r} is not mentioned in the question")
        slots.append((f"C{i + 1}", ctype))
        windows.append(window)
    spans = sorted(zip(windows, range(len(cols))))
    for ((_, b), _), ((c, _), _) in zip(spans, spans[1:]):
        if c < b:
            raise SkeletonError("column mentions overlap in the question")
    template = question
    for (a, b), i in reversed(spans):
        sid, t = slots[i]
        template = template[:a] + f"{sid}_{_SLOT_SUFFIX[t]}" + template[b:]
    return Skeleton(template, _remap(q, {col: i for i, col in enumerate(cols)}), tuple(slots))


def instantiate_skeleton(s: Skeleton, table: Table) -> tuple[Query, str] | None:
    """First-fit assignment of distinct table columns to the skeleton's slots."""
    used: list[int] = []
    for _, stype in s.slots:
        col = next((c for c, t in enumerate(table.col_types) if t == stype and c not in used), None)
        if col is None:
            return None
        used.append(col)
    query = _remap(s.query_template, dict(enumerate(used)))
    question = s.question_template
    for i, name in sorted(enumerate(s.slot_names), key=lambda p: -len(p[1])):
        question = question.replace(name, table.headers[used[i]].lower())
    return query, question


# -- answers to NLI instances -----------------------------------------------------

def _sql_lineage(op_table: Table, q: Query, question: str, value: CellValue, base_id: str,
                 source_task: str, flags: dict) -> Lineage:
    return Lineage(
        base_id=base_id, op="sql_execute", source_task=source_task, base_text=question,
        sql={"query": render_sql(q, op_table), "question": question, "value": value.raw},
        flags=dict(flags),
    )


def contradiction_fillers(q: Query, answer: Answer, table: Table) -> list[CellValue]:
    """Select-column values that are not in the executed answer, in row order."""
    if q.agg in ("count", "sum", "avg"):
        return []
    out: list[CellValue] = []
    for r in table.body_rows():
        cell = table.cells[r][q.select_col]
        if not table.conforms((r, q.select_col)) or answer_contains(answer, cell):
            continue
        if any(compare(cell, "=", o) for o in out):
            continue
        out.append(cell)
    return out


def answers_to_instances(
    question: str,
    answer: Answer,
    table: Table,
    converter,
    *,
    query: Query,
    max_contradictions: int | None = None,
    base_id: str = "",
    source_task: str = "SPT",
    variant: str = OG,
    diag: Counter | None = None,
    ids: IdAllocator | None = None,
) -> list[NliInstance]:
    """One entailment per answer value; contradictions from values outside the answer."""
    diag = diag if diag is not None else Counter()
    ids = ids or IdAllocator()
    converter = converter or TemplateConverter()
    flags = {} if getattr(converter, "name", "template") == "template" else {"converter": converter.name}
    if not answer.values:
        diag["sql_empty_answer"] += 1
        return []
    if query.agg == "count" and answer.values[0].number == 0:
        diag["sql_zero_count"] += 1
        return []

    def make(value: CellValue, label: str, bid: str) -> NliInstance | None:
        statement = converter.qa2d(question, value.raw, table)
        if statement is None:
            diag["conversion_failed"] += 1
            return None
        lineage = _sql_lineage(table, query, question, value, bid, source_task, flags)
        return NliInstance(ids(table.id, variant, "sql_execute"), table.id, variant, statement, label, lineage)

    out: list[NliInstance] = []
    for v in answer.values:
        inst = make(v, ENTAIL, base_id)
        if inst is not None:
            out.append(inst)
    if not out:
        return []
    bid = base_id or out[0].id
    for inst in out:
        inst.lineage.base_id = bid
    fillers = contradiction_fillers(query, answer, table)
    if not fillers:
        diag["sql_no_contradiction_fillers"] += 1
    for v in fillers[:max_contradictions]:
        inst = make(v, CONTRADICT, bid)
        if inst is not None:
            out.append(inst)
    return out


def derive_sql_label(lineage: Lineage, table: Table) -> str:
    """Re-execute the recorded query and test the stated answer value."""
    sql = lineage.sql or {}
    q = parse_sql(sql["query"], table)
    answer = execute(q, table)
    return ENTAIL if answer_contains(answer, parse_cell(sql["value"])) else CONTRADICT
