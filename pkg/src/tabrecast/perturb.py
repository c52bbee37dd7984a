"""Hypothesis perturbation: entailments, contradictions, antonyms, rank rewrites."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .align import (
    DATE_COMPONENT, NUMERIC_WORD, ORDINAL_WORD, SUPERLATIVES,
    Alignment, AlignmentSet, Hypothesis, SuperlativeAlignment,
)
from .instances import (
    CONTRADICT, ENTAIL, OG, IdAllocator, Lineage, NliInstance, apply_edits, claim_to_json, rank_to_json,
)
from .lexicons import AntonymLexicon
from .numwords import MAX_WORD_NUMBER, cardinal_words, ordinal_suffix, ordinal_words
from .oracle import Claim, RankClaim, claim_key, contradiction_holds, evaluate
from .tables import DATE, MONTHS, NUMBER, Coord, Table, candidate_pool, dense_rank, format_number
from .text import match_case

DEFAULT_MAX_ENTAILMENTS = 5
DEFAULT_MAX_CONTRADICTIONS = 5
MAX_CONTRADICTION_ATTEMPTS = 20_000
MAX_RANK = 3
_RANK_WORDS = {2: "second", 3: "third"}


@dataclass(frozen=True)
class Substitution:
    alignment: Alignment
    replacement: Coord
    surface: str


# -- rendering --------------------------------------------------------------

def rank_rewrite(sup: SuperlativeAlignment, new_rank: int) -> str:
    if not 1 <= new_rank <= MAX_RANK:
        raise ValueError(f"rank {new_rank} has no supported phrasing")
    word = sup.word or "most"
    return word if new_rank == 1 else f"{_RANK_WORDS[new_rank]} {word}"


def _render_number(kind: str, original: str, value: float) -> str | None:
    if not value.is_integer():
        return format_number(value) if kind == NUMERIC_WORD else None
    n = int(value)
    digits = original[:1].isdigit()
    sep = "-" if "-" in original else " "
    if kind == ORDINAL_WORD:
        if digits or not 0 <= n <= MAX_WORD_NUMBER:
            return ordinal_suffix(n)
        return sep.join(ordinal_words(n))
    if digits or not 0 <= n <= MAX_WORD_NUMBER:
        return format_number(value)
    return sep.join(cardinal_words(n))


def _render_date(al: Alignment, hyp: Hypothesis, cell) -> str | None:
    if cell.kind != DATE:
        return None
    year, month, day = cell.date
    start, end = al.span
    pieces = []
    for k, comp in zip(range(start, end), al.style):
        tok = hyp.tokens[k]
        orig = hyp.text[tok.start:tok.core_end]
        if comp == "year":
            pieces.append(str(year))
        elif comp == "month":
            if month is None:
                return None
            name = MONTHS[month - 1]
            pieces.append(name[:3] if len(orig) <= 4 else name)
        else:
            if day is None:
                return None
            pieces.append(ordinal_suffix(day) if not orig.isdigit() else str(day))
        if k + 1 < end:
            pieces.append(hyp.text[tok.core_end:hyp.tokens[k + 1].start])
    return "".join(pieces)


def render_surface(al: Alignment, hyp: Hypothesis, cell) -> str | None:
    """Text that mentions ``cell`` the way the hypothesis mentioned the aligned cell."""
    original = hyp.surface(al.span)
    if al.kind == DATE_COMPONENT:
        rendered = _render_date(al, hyp, cell)
    elif al.kind in (NUMERIC_WORD, ORDINAL_WORD):
        rendered = None if cell.kind != NUMBER else _render_number(al.kind, original, cell.number)
    else:
        rendered = " ".join(cell.raw.split())
    if not rendered:
        return None
    return match_case(original, rendered)


# -- grounding ----------------------------------------------------------------

def _claim(table: Table, al: Alignment, source: Coord) -> Claim:
    aggregate = al.cell.row in table.aggregate_rows
    return Claim(
        al.cell.col, table.cell(source), al.kind, al.style,
        group=-1 if aggregate else al.cell.row,
        aggregate_row=al.cell.row if aggregate else None,
    )


def consistent_superlatives(aset: AlignmentSet) -> list[SuperlativeAlignment]:
    """Superlatives whose stated rank agrees with the anchor row's real rank."""
    return [s for s in aset.superlatives if s.rank == s.stated_rank]


def base_grounding(table: Table, aset: AlignmentSet):
    """Claims (with their source coordinates) and rank claims of the unmodified base."""
    claims = [(al.cell, _claim(table, al, al.cell)) for al in aset.alignments]
    ranks = [RankClaim(s.column, s.direction, s.stated_rank, s.anchor_row)
             for s in consistent_superlatives(aset)]
    return claims, ranks


def _lineage(op, base_id, source_task, aset, edits, subs, claims, ranks, **extra) -> Lineage:
    return Lineage(
        base_id=base_id, op=op, source_task=source_task, base_text=aset.base.text,
        edits=[[a, b, t] for a, b, t in edits],
        substitutions=subs,
        claims=[claim_to_json(src, c) for src, c in claims],
        ranks=[rank_to_json(r) for r in ranks],
        **extra,
    )


def base_instance(table: Table, aset: AlignmentSet, *, base_id: str | None = None,
                  source_task: str = "T2TG", variant: str = OG, op: str = "identity",
                  flags: dict | None = None, ids: IdAllocator | None = None) -> NliInstance:
    claims, ranks = base_grounding(table, aset)
    iid = (ids or IdAllocator())(table.id, variant, op)
    lineage = _lineage(op, base_id or iid, source_task, aset, [], [], claims, ranks, flags=dict(flags or {}))
    return NliInstance(iid, table.id, variant, aset.base.text, ENTAIL, lineage)


# -- entailments ------------------------------------------------------------

def generate_entailments(
    table: Table,
    aset: AlignmentSet,
    limit: int | None = DEFAULT_MAX_ENTAILMENTS,
    *,
    base_id: str = "base",
    source_task: str = "T2TG",
    variant: str = OG,
    diag: Counter | None = None,
    ids: IdAllocator | None = None,
) -> list[NliInstance]:
    diag = diag if diag is not None else Counter()
    if limit is not None and limit <= 0:
        return []
    if not aset.complete:
        diag["entailments_skipped_incomplete_alignment"] += 1
        return []
    if aset.unbound_superlatives or len(consistent_superlatives(aset)) != len(aset.superlatives):
        diag["entailments_skipped_unverifiable_superlative"] += 1
        return []
    rows = {a.cell.row for a in aset.alignments if a.cell.row not in table.aggregate_rows}
    if not rows:
        return []
    if len(rows) > 1:
        diag["entailments_skipped_mixed_rows"] += 1
        return []
    (x,) = rows
    base = aset.base
    ids = ids or IdAllocator()
    out: list[NliInstance] = []
    seen = {base.text}
    for z in table.body_rows():
        if z == x:
            continue
        built = _row_substitution(table, aset, z)
        if built is None:
            continue
        edits, subs, claims, ranks = built
        text = apply_edits(base.text, edits)
        if text in seen:
            continue
        if not evaluate(table, [c for _, c in claims], ranks).holds:
            diag["entailments_failed_oracle"] += 1
            continue
        seen.add(text)
        op = "rank_rewrite" if aset.superlatives else "substitute_all"
        lineage = _lineage(op, base_id, source_task, aset, edits, subs, claims, ranks)
        out.append(NliInstance(ids(table.id, variant, op), table.id, variant, text, ENTAIL, lineage))
        if limit is not None and len(out) >= limit:
            break
    return out


def _row_substitution(table: Table, aset: AlignmentSet, z: int):
    base = aset.base
    edits, subs, claims, ranks = [], [], [], []
    for al in aset.alignments:
        if al.cell.row in table.aggregate_rows:
            claims.append((al.cell, _claim(table, al, al.cell)))
            continue
        src = Coord(z, al.cell.col)
        if not table.conforms(src):
            return None
        surface = render_surface(al, base, table.cell(src))
        if surface is None:
            return None
        a, b = base.char_span(al.span)
        edits.append((a, b, surface))
        subs.append({"cell": list(al.cell), "replacement": list(src), "surface": surface})
        claims.append((src, _claim(table, al, src)))
    for sup in aset.superlatives:
        rank = dense_rank(table, z, sup.column, sup.direction)
        if rank is None or rank > MAX_RANK:
            return None
        a, b = base.char_span(sup.span)
        edits.append((a, b, match_case(base.text[a:b], rank_rewrite(sup, rank))))
        ranks.append(RankClaim(sup.column, sup.direction, rank, z))
    # the substituted row becomes the group every row-grounded claim belongs to
    claims = [(src, Claim(c.col, c.value, c.kind, c.style, z if c.aggregate_row is None else -1,
                          c.aggregate_row)) for src, c in claims]
    return edits, subs, claims, ranks


# -- contradictions -----------------------------------------------------------

def _substitution_options(table: Table, aset: AlignmentSet) -> list[list[Coord]]:
    options = []
    for al in aset.alignments:
        if al.cell.row in table.aggregate_rows:
            # Aggregate values may be falsified with body values; aggregate labels may not.
            if table.col_types[al.cell.col] != NUMBER:
                options.append([])
                continue
            pool = [Coord(r, al.cell.col) for r in table.body_rows() if table.conforms((r, al.cell.col))]
        else:
            pool = candidate_pool(table, al.cell)
        base_key = claim_key(al.kind, al.style, table.cell(al.cell))
        keys, cands = {base_key}, []
        for c in pool:
            k = claim_key(al.kind, al.style, table.cell(c))
            if k in keys or render_surface(al, aset.base, table.cell(c)) is None:
                continue
            keys.add(k)
            cands.append(c)
        options.append(cands)
    return options


def generate_contradictions(
    table: Table,
    aset: AlignmentSet,
    limit: int | None = DEFAULT_MAX_CONTRADICTIONS,
    *,
    base_id: str = "base",
    source_task: str = "T2TG",
    variant: str = OG,
    diag: Counter | None = None,
    ids: IdAllocator | None = None,
) -> list[NliInstance]:
    diag = diag if diag is not None else Counter()
    als = aset.alignments
    if not als or (limit is not None and limit <= 0):
        return []
    base = aset.base
    options = _substitution_options(table, aset)
    replaceable = [i for i, opts in enumerate(options) if opts]
    base_claims, ranks = base_grounding(table, aset)
    ids = ids or IdAllocator()
    out: list[NliInstance] = []
    seen = {base.text}
    attempts = 0
    guarded = 0
    for size in range(1, len(replaceable) + 1):
        for subset in itertools.combinations(replaceable, size):
            for choice in itertools.product(*(options[i] for i in subset)):
                attempts += 1
                if attempts > MAX_CONTRADICTION_ATTEMPTS:
                    diag["contradiction_search_truncated"] += 1
                    return out
                claims = list(base_claims)
                edits, subs = [], []
                for i, src in zip(subset, choice):
                    al = als[i]
                    surface = render_surface(al, base, table.cell(src))
                    a, b = base.char_span(al.span)
                    edits.append((a, b, surface))
                    subs.append({"cell": list(al.cell), "replacement": list(src),
                                 "surface": surface, "alignment": i})
                    old = claims[i][1]
                    claims[i] = (src, Claim(old.col, table.cell(src), old.kind, old.style,
                                            old.group, old.aggregate_row))
                text = apply_edits(base.text, edits)
                if text in seen:
                    continue
                if not contradiction_holds(table, [c for _, c in claims], ranks):
                    guarded += 1
                    continue
                seen.add(text)
                lineage = _lineage("substitute_some", base_id, source_task, aset, edits, subs, claims, ranks)
                iid = ids(table.id, variant, "substitute_some")
                out.append(NliInstance(iid, table.id, variant, text, CONTRADICT, lineage))
                if limit is not None and len(out) >= limit:
                    return out
    if guarded and not out:
        diag["contradictions_all_guarded_out"] += 1
    return out


# -- antonyms -----------------------------------------------------------------

_FLIP = {"max": "min", "min": "max"}


def antonym_contradictions(
    base: Hypothesis,
    lexicon: AntonymLexicon,
    limit: int | None = DEFAULT_MAX_CONTRADICTIONS,
    *,
    table: Table | None = None,
    aset: AlignmentSet | None = None,
    base_id: str = "base",
    source_task: str = "T2TG",
    variant: str = OG,
    diag: Counter | None = None,
    ids: IdAllocator | None = None,
) -> list[NliInstance]:
    """One-word antonym swaps.

    A swap that flips a table-grounded superlative is checked by the oracle;
    any other swap is emitted as unverifiable.
    """
    diag = diag if diag is not None else Counter()
    if limit is not None and limit <= 0:
        return []
    entity_tokens = set()
    sups = {}
    claims, ranks = [], []
    if aset is not None:
        entity_tokens = {k for a in aset.alignments for k in range(*a.span)}
        sups = {s.word_index: s for s in consistent_superlatives(aset)}
        if table is not None:
            claims, ranks = base_grounding(table, aset)
    table_id = table.id if table is not None else "table"
    ids = ids or IdAllocator()
    out: list[NliInstance] = []
    seen = {base.text}
    for i, tok in enumerate(base.tokens):
        if i in entity_tokens:
            continue
        antonym = lexicon.antonym(tok.text)
        if antonym is None:
            continue
        original = base.text[tok.start:tok.core_end]
        surface = match_case(original, antonym)
        edits = [(tok.start, tok.core_end, surface)]
        text = apply_edits(base.text, edits)
        if text in seen:
            continue
        sup = sups.get(i)
        flags = {}
        new_ranks = []
        if sup is not None and table is not None and SUPERLATIVES.get(antonym) == _FLIP[sup.direction]:
            new_ranks = [
                RankClaim(r.col, _FLIP[r.direction], r.rank, r.group)
                if (r.col, r.direction, r.group) == (sup.column, sup.direction, sup.anchor_row) else r
                for r in ranks
            ]
            if not contradiction_holds(table, [c for _, c in claims], new_ranks):
                diag["antonyms_guarded_out"] += 1
                continue
            lineage_claims = claims
        elif tok.text in SUPERLATIVES or antonym in SUPERLATIVES:
            # A superlative the table could not ground may well be true after the swap.
            diag["antonyms_skipped_ungrounded_superlative"] += 1
            continue
        else:
            flags["oracle"] = False
            lineage_claims = []
        seen.add(text)
        lineage = Lineage(
            base_id=base_id, op="antonym", source_task=source_task, base_text=base.text,
            edits=[[a, b, t] for a, b, t in edits],
            substitutions=[{"token": i, "word": tok.text, "antonym": antonym}],
            claims=[claim_to_json(src, c) for src, c in lineage_claims],
            ranks=[rank_to_json(r) for r in new_ranks],
            flags=flags,
        )
        out.append(NliInstance(ids(table_id, variant, "antonym"), table_id, variant, text, CONTRADICT, lineage))
        if limit is not None and len(out) >= limit:
            break
    return out


def substitutions_of(instance: NliInstance) -> Sequence[dict]:
    return instance.lineage.substitutions
