"""Cardinal and ordinal English number words for 0-100."""
from __future__ import annotations

import re

_UNITS = (
    "zero one two three four five six seven eight nine ten eleven twelve "
    "thirteen fourteen fifteen sixteen seventeen eighteen nineteen"
).split()
_TENS = "_ _ twenty thirty forty fifty sixty seventy eighty ninety".split()

_ORDINAL_UNITS = (
    "zeroth first second third fourth fifth sixth seventh eighth ninth tenth "
    "eleventh twelfth thirteenth fourteenth fifteenth sixteenth seventeenth "
    "eighteenth nineteenth"
).split()
_ORDINAL_TENS = "_ _ twentieth thirtieth fortieth fiftieth sixtieth seventieth eightieth ninetieth".split()

MAX_WORD_NUMBER = 100

_DIGIT_ORDINAL_RE = re.compile(r"^(\d+)(st|nd|rd|th)$")


def cardinal_words(n: int) -> list[str]:
    if not 0 <= n <= MAX_WORD_NUMBER:
        raise ValueError(f"{n} outside 0..{MAX_WORD_NUMBER}")
    if n == 100:
        return ["one", "hundred"]
    if n < 20:
        return [_UNITS[n]]
    tens, unit = divmod(n, 10)
    return [_TENS[tens]] if unit == 0 else [_TENS[tens], _UNITS[unit]]


def ordinal_words(n: int) -> list[str]:
    if not 0 <= n <= MAX_WORD_NUMBER:
        raise ValueError(f"{n} outside 0..{MAX_WORD_NUMBER}")
    if n == 100:
        return ["one", "hundredth"]
    if n < 20:
        return [_ORDINAL_UNITS[n]]
    tens, unit = divmod(n, 10)
    return [_ORDINAL_TENS[tens]] if unit == 0 else [_TENS[tens], _ORDINAL_UNITS[unit]]


def ordinal_suffix(n: int) -> str:
    if 10 <= n % 100 <= 20:
        return f"{n}th"
    return f"{n}" + {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")


_CARD_UNIT = {w: i for i, w in enumerate(_UNITS)}
_ORD_UNIT = {w: i for i, w in enumerate(_ORDINAL_UNITS)}
_CARD_TENS = {w: i * 10 for i, w in enumerate(_TENS) if w != "_"}
_ORD_TENS = {w: i * 10 for i, w in enumerate(_ORDINAL_TENS) if w != "_"}


def parse_number_words(tokens, start: int = 0) -> tuple[int, bool, int] | None:
    """Read the longest number phrase at ``tokens[start]``.

    Returns ``(value, is_ordinal, token_count)`` or None.  Handles "forty four",
    "forty fourth", "twentieth", "one hundred", "a hundredth" and digit
    ordinals such as "44th".
    """
    if start >= len(tokens):
        return None
    first = tokens[start]
    nxt = tokens[start + 1] if start + 1 < len(tokens) else None

    m = _DIGIT_ORDINAL_RE.match(first)
    if m:
        return int(m.group(1)), True, 1
    if first in ("one", "a") and nxt in ("hundred", "hundredth"):
        return 100, nxt == "hundredth", 2
    if first == "hundred":
        return 100, False, 1
    if first == "hundredth":
        return 100, True, 1
    if first in _CARD_TENS:
        tens = _CARD_TENS[first]
        if nxt in _CARD_UNIT and 0 < _CARD_UNIT[nxt] < 10:
            return tens + _CARD_UNIT[nxt], False, 2
        if nxt in _ORD_UNIT and 0 < _ORD_UNIT[nxt] < 10:
            return tens + _ORD_UNIT[nxt], True, 2
        return tens, False, 1
    if first in _ORD_TENS:
        return _ORD_TENS[first], True, 1
    if first in _CARD_UNIT:
        return _CARD_UNIT[first], False, 1
    if first in _ORD_UNIT:
        return _ORD_UNIT[first], True, 1
    return None
