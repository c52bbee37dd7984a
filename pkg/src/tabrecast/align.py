"""Cell-to-hypothesis alignment: exact and partial matching plus superlatives."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lexicons import load_abbreviations
from .numwords import ordinal_suffix, parse_number_words
from .tables import (
    DATE, MONTHS, NUMBER, TEXT, CellValue, Coord, Table, dense_rank,
)
from .text import depluralize, norm_tokens, tokenize

EXACT = "exact"
PARTIAL = "partial_token"
NUMERIC_WORD = "numeric_word"
ORDINAL_WORD = "ordinal_word"
DATE_COMPONENT = "date_component"
ABBREVIATION = "abbreviation"
POSSESSIVE = "possessive"
KIND_ORDER = (EXACT, PARTIAL, POSSESSIVE, NUMERIC_WORD, ORDINAL_WORD, DATE_COMPONENT, ABBREVIATION)

PARTIAL_MIN_COVERAGE = 0.5
SUPERLATIVE_WINDOW = 3
SUPERLATIVES = {
    "most": "max", "highest": "max", "maximum": "max", "largest": "max",
    "greatest": "max", "biggest": "max",
    "least": "min", "lowest": "min", "minimum": "min", "smallest": "min",
    "fewest": "min",
}
RANK_PREFIXES = {"second": 2, "third": 3, "2nd": 2, "3rd": 3}

STOPWORDS = frozenset(
    "a an the of in on at to for by and or with from as is was were be de la le".split()
)
DEFAULT_ABBREVIATIONS = load_abbreviations()


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    core_end: int
    possessive: bool = False


@dataclass(frozen=True)
class Hypothesis:
    text: str
    tokens: tuple[Token, ...]

    @property
    def words(self) -> list[str]:
        return [t.text for t in self.tokens]

    def char_span(self, span: tuple[int, int]) -> tuple[int, int]:
        """Character range of a token span, leaving any trailing possessive out."""
        start, end = span
        return self.tokens[start].start, self.tokens[end - 1].core_end

    def surface(self, span: tuple[int, int]) -> str:
        a, b = self.char_span(span)
        return self.text[a:b]


def normalize_tokens(text: str) -> Hypothesis:
    if not text or not text.strip():
        raise ValueError("empty hypothesis")
    return Hypothesis(text, tuple(Token(*t) for t in tokenize(text)))


@dataclass(frozen=True)
class Alignment:
    cell: Coord
    span: tuple[int, int]
    kind: str
    score: float
    style: tuple[str, ...] = ()   # date components matched, in hypothesis order


@dataclass(frozen=True)
class SuperlativeAlignment:
    span: tuple[int, int]
    column: int
    direction: str
    rank: int
    stated_rank: int = 1
    word: str = ""
    word_index: int = -1          # token index of the superlative word itself
    anchor_row: int = -1


@dataclass(frozen=True)
class AlignmentSet:
    base: Hypothesis
    alignments: tuple[Alignment, ...]
    relevant_cells: tuple[Coord, ...]
    superlatives: tuple[SuperlativeAlignment, ...] = ()
    unbound_superlatives: tuple[int, ...] = ()

    @property
    def complete(self) -> bool:
        """Every relevant cell is covered by a span or by a bound superlative."""
        covered = {a.cell for a in self.alignments}
        covered |= {Coord(s.anchor_row, s.column) for s in self.superlatives}
        return set(self.relevant_cells) <= covered


# -- individual matchers ----------------------------------------------------

def _is_subsequence(needle: Sequence[str], hay: Sequence[str]) -> bool:
    it = iter(hay)
    return all(tok in it for tok in needle)


def _free(span_range: range, blocked: set[int]) -> bool:
    return not any(i in blocked for i in span_range)


def _exact(cell_toks, words, blocked):
    n = len(cell_toks)
    hits = []
    for i in range(len(words) - n + 1):
        if words[i:i + n] == cell_toks and _free(range(i, i + n), blocked):
            hits.append(((i, i + n), 1.0, ()))
    return hits


def _maximal_windows(words, blocked, fits):
    """Maximal runs ``words[i:j]`` for which ``fits(i, j)`` holds (prefix-closed)."""
    out = []
    last_end = -1
    for i in range(len(words)):
        if i in blocked:
            continue
        j = i
        while j < len(words) and j not in blocked and fits(i, j + 1):
            j += 1
        if j > i and j > last_end:
            out.append((i, j))
            last_end = j
    return out


def _partial(cell_toks, words, blocked):
    n = len(cell_toks)
    if n < 2:
        return []
    hits = []
    for i, j in _maximal_windows(words, blocked, lambda a, b: _is_subsequence(words[a:b], cell_toks)):
        window = words[i:j]
        coverage = len(window) / n
        if coverage < PARTIAL_MIN_COVERAGE or coverage >= 1.0:
            continue
        if len(window) < 2 and len(window[0]) < 4:
            continue
        if all(w in STOPWORDS for w in window):
            continue
        hits.append(((i, j), coverage, ()))
    return hits


def _number_words(cell: CellValue, words, blocked):
    value = cell.number
    hits = []
    i = 0
    while i < len(words):
        if i in blocked:
            i += 1
            continue
        parsed = parse_number_words(words, i) if value.is_integer() else None
        if parsed and parsed[0] == value and _free(range(i, i + parsed[2]), blocked):
            kind = ORDINAL_WORD if parsed[1] else NUMERIC_WORD
            hits.append(((i, i + parsed[2]), 1.0, (kind,)))
            i += parsed[2]
            continue
        try:
            if float(words[i]) == value:
                hits.append(((i, i + 1), 1.0, (NUMERIC_WORD,)))
        except ValueError:
            pass
        i += 1
    return hits


def date_component_forms(date: tuple) -> dict[str, set[str]]:
    year, month, day = date
    forms = {"year": {str(year)}}
    if month is not None:
        name = MONTHS[month - 1]
        forms["month"] = {name, name[:3]} | ({"sept"} if month == 9 else set())
    if day is not None:
        forms["day"] = {str(day), ordinal_suffix(day)}
    return forms


def _date_components(cell: CellValue, words, blocked):
    forms = date_component_forms(cell.date)

    def component(word):
        return next((name for name, f in forms.items() if word in f), None)

    def fits(a, b):
        names = [component(w) for w in words[a:b]]
        return None not in names and len(set(names)) == len(names)

    hits = []
    for i, j in _maximal_windows(words, blocked, fits):
        style = tuple(component(w) for w in words[i:j])
        if "year" not in style and "month" not in style:
            continue
        hits.append(((i, j), len(style) / len(forms), style))
    return hits


def _expand(tokens, abbrev):
    stream = []
    for idx, tok in enumerate(tokens):
        for part in abbrev.get(tok, (tok,)):
            stream.append((part, idx, tok in abbrev))
    return stream


def _abbreviation(cell_toks, words, blocked, abbrev):
    cell_stream = _expand(cell_toks, abbrev)
    cell_parts = [p for p, _, _ in cell_stream]
    n = len(cell_toks)

    def consume(a, b):
        """Greedy subsequence match; returns consumed cell positions or None."""
        hyp_stream = _expand(words[a:b], abbrev)
        used = []
        pos = 0
        for part, _, _ in hyp_stream:
            while pos < len(cell_parts) and cell_parts[pos] != part:
                pos += 1
            if pos == len(cell_parts):
                return None
            used.append(pos)
            pos += 1
        return used, any(flag for _, _, flag in hyp_stream)

    hits = []
    for i, j in _maximal_windows(words, blocked, lambda a, b: consume(a, b) is not None):
        used, hyp_expanded = consume(i, j)
        used = set(used)
        covered = {
            origin
            for origin in range(n)
            if all(p in used for p, (_, o, _) in enumerate(cell_stream) if o == origin)
        }
        cell_expanded = any(cell_stream[p][2] for p in used)
        if not (hyp_expanded or cell_expanded):
            continue
        coverage = len(covered) / n
        if coverage < PARTIAL_MIN_COVERAGE:
            continue
        hits.append(((i, j), coverage, ()))
    return hits


def _cell_hits(cell: CellValue, hyp: Hypothesis, abbrev, blocked) -> list[tuple[str, tuple, float, tuple]]:
    """All hits of the first matcher (in precedence order) that finds any."""
    if cell.is_empty:
        return []
    words = hyp.words
    cell_toks = norm_tokens(cell.raw)
    if not cell_toks:
        return []

    hits = _exact(cell_toks, words, blocked)
    if hits:
        return [(EXACT, span, score, style) for span, score, style in hits]

    hits = _partial(cell_toks, words, blocked)
    if hits:
        out = []
        for span, score, style in hits:
            poss = any(hyp.tokens[k].possessive for k in range(*span))
            out.append((POSSESSIVE if poss else PARTIAL, span, score, style))
        return out

    if cell.kind == NUMBER:
        hits = _number_words(cell, words, blocked)
        if hits:
            return [(style[0], span, score, ()) for span, score, style in hits]

    if cell.kind == DATE:
        hits = _date_components(cell, words, blocked)
        if hits:
            return [(DATE_COMPONENT, span, score, style) for span, score, style in hits]

    hits = _abbreviation(cell_toks, words, blocked, abbrev)
    return [(ABBREVIATION, span, score, style) for span, score, style in hits]


def match_cell(
    cell: CellValue,
    coord: Coord,
    hyp: Hypothesis,
    abbreviations: dict | None = None,
    blocked: Iterable[int] = (),
) -> Alignment | None:
    abbrev = DEFAULT_ABBREVIATIONS if abbreviations is None else abbreviations
    hits = _cell_hits(cell, hyp, abbrev, set(blocked))
    if not hits:
        return None
    kind, span, score, style = max(hits, key=lambda h: (h[2], -h[1][0]))
    return Alignment(Coord(*coord), span, kind, score, style)


# -- superlatives -----------------------------------------------------------

def _header_key(header: str) -> list[str]:
    return [depluralize(t) for t in norm_tokens(re.sub(r"\(.*?\)", " ", header))]


def find_superlative_phrases(hyp: Hypothesis, table: Table):
    """Yield ``(span, column, direction, stated_rank, word_index)`` candidates.

    Also returns superlative words for which no numeric column could be found.
    """
    words = [depluralize(w) for w in hyp.words]
    raw_words = hyp.words
    keys = [(c, _header_key(h)) for c, h in enumerate(table.headers) if table.col_types[c] == NUMBER]
    found, unbound = [], []
    for i, w in enumerate(raw_words):
        direction = SUPERLATIVES.get(w)
        if direction is None:
            continue
        column = None
        for k in range(i + 1, min(len(words), i + 1 + SUPERLATIVE_WINDOW)):
            for c, key in keys:
                if key and words[k:k + len(key)] == key:
                    column = c
                    break
            if column is not None:
                break
        if column is None:
            unbound.append(i)
            continue
        start, stated = i, 1
        if i > 0 and raw_words[i - 1] in RANK_PREFIXES:
            start, stated = i - 1, RANK_PREFIXES[raw_words[i - 1]]
        found.append(((start, i + 1), column, direction, stated, i))
    return found, unbound


def detect_superlatives(hyp: Hypothesis, table: Table, anchor: Alignment) -> list[SuperlativeAlignment]:
    if table.col_types[anchor.cell.col] != TEXT:
        return []
    phrases, _ = find_superlative_phrases(hyp, table)
    out = []
    for span, column, direction, stated, wi in phrases:
        rank = dense_rank(table, anchor.cell.row, column, direction)
        if rank is None:
            continue
        out.append(SuperlativeAlignment(
            span, column, direction, rank, stated, hyp.tokens[wi].text, wi, anchor.cell.row,
        ))
    return out


# -- whole-set alignment ----------------------------------------------------

def align_all(
    table: Table,
    relevant_cells: Sequence[Sequence[int]],
    base: Hypothesis,
    abbreviations: dict | None = None,
) -> AlignmentSet:
    abbrev = DEFAULT_ABBREVIATIONS if abbreviations is None else abbreviations
    relevant = []
    for rc in relevant_cells:
        coord = Coord(*rc)
        if not (0 <= coord.row < table.row_count and 0 <= coord.col < table.col_count):
            raise ValueError(f"relevant cell {tuple(coord)} outside table")
        if coord not in relevant:
            relevant.append(coord)

    phrases, unbound = find_superlative_phrases(base, table)
    reserved = {k for span, *_ in phrases for k in range(*span)} | set(unbound)

    ranked = []
    for idx, coord in enumerate(relevant):
        for kind, span, score, style in _cell_hits(table.cell(coord), base, abbrev, reserved):
            ranked.append(((-score, KIND_ORDER.index(kind), idx, span[0]),
                           Alignment(coord, span, kind, score, style)))
    ranked.sort(key=lambda item: item[0])

    taken_tokens: set[int] = set()
    assigned: dict[Coord, Alignment] = {}
    for _, al in ranked:
        if al.cell in assigned or not _free(range(*al.span), taken_tokens):
            continue
        assigned[al.cell] = al
        taken_tokens.update(range(*al.span))
    alignments = tuple(sorted(assigned.values(), key=lambda a: a.span))

    superlatives: list[SuperlativeAlignment] = []
    anchor = next(
        (a for a in alignments
         if table.col_types[a.cell.col] == TEXT and a.cell.row not in table.aggregate_rows),
        None,
    )
    if anchor is not None and phrases:
        superlatives = detect_superlatives(base, table, anchor)
    bound = {s.word_index for s in superlatives}
    unbound_all = tuple(sorted(set(unbound) | {wi for *_, wi in phrases if wi not in bound}))
    return AlignmentSet(base, alignments, tuple(relevant), tuple(superlatives), unbound_all)
