"""Low-level tokenization shared by table typing, alignment and SQL literals."""
from __future__ import annotations

import re
from typing import NamedTuple

# Numbers keep internal separators ("1,235", "3.5") and ordinal suffixes ("44th");
# words keep internal apostrophes so possessives can be detected afterwards.
_TOKEN_RE = re.compile(
    r"\d+(?:[.,]\d+)*(?:st|nd|rd|th)?(?![^\W_])"
    r"|[^\W_]+(?:['’][^\W_]+)*"
)
_THOUSANDS_RE = re.compile(r"^\d{1,3}(?:,\d{3})+(?:\.\d+)?$")


class RawToken(NamedTuple):
    text: str        # normalized form
    start: int       # char offset of the token in the source
    end: int         # end offset including any possessive suffix
    core_end: int    # end offset excluding the possessive suffix
    possessive: bool


def _normalize_word(word: str) -> str:
    word = word.casefold()
    if _THOUSANDS_RE.match(word):
        word = word.replace(",", "")
    return word


def tokenize(text: str) -> list[RawToken]:
    out = []
    for m in _TOKEN_RE.finditer(text):
        word = m.group(0)
        start, end = m.span()
        possessive = False
        core_end = end
        if len(word) > 2 and word[-2] in "'’" and word[-1] in "sS":
            possessive = True
            core_end = end - 2
            word = word[:-2]
        out.append(RawToken(_normalize_word(word), start, end, core_end, possessive))
    return out


def norm_tokens(text: str) -> list[str]:
    return [t.text for t in tokenize(text)]


def norm_text(text: str) -> str:
    """Case- and punctuation-insensitive comparison key for free text."""
    return " ".join(norm_tokens(text))


def depluralize(word: str) -> str:
    if len(word) > 3 and word.endswith("ies"):
        return word[:-3] + "y"
    if len(word) > 3 and word.endswith(("ses", "xes", "ches", "shes")):
        return word[:-2]
    if len(word) > 2 and word.endswith("s") and not word.endswith("ss"):
        return word[:-1]
    return word


def match_case(template: str, replacement: str) -> str:
    """Carry the leading capitalization of ``template`` over to ``replacement``."""
    if not template or not replacement:
        return replacement
    if template.isupper() and len(template) > 1 and replacement.islower():
        return replacement.upper()
    if template[0].isupper() and replacement[0].islower():
        return replacement[0].upper() + replacement[1:]
    return replacement
