"""Bundled word lists (abbreviations, antonyms, header names) and their loaders."""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

POS_TAGS = ("adj", "adv", "comparative", "superlative")

# Closed-class words the suffix heuristic would tag wrongly or not at all.
_CLOSED_POS = {
    "most": "superlative", "least": "superlative", "best": "superlative",
    "worst": "superlative", "maximum": "superlative", "minimum": "superlative",
    "more": "comparative", "less": "comparative", "better": "comparative",
    "worse": "comparative", "lesser": "comparative", "fewer": "comparative",
    "before": "adv", "after": "adv", "always": "adv", "never": "adv",
    "above": "adv", "below": "adv",
    "high": "adj", "low": "adj", "large": "adj", "small": "adj", "long": "adj",
    "short": "adj", "old": "adj", "young": "adj", "early": "adj", "late": "adj",
}
# -er / -est words that are not comparatives or superlatives.
_SUFFIX_EXCEPTIONS = frozenset(
    "after other number member quarter water paper winter summer river "
    "player leader manager owner never however whether together under over "
    "former latter rest interest forest west test contest best east".split()
)


def _read_lines(path: str | Path | None, default: str):
    if path is None:
        text = resources.files("tabrecast").joinpath("data").joinpath(default).read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


def load_header_lexicon(path: str | Path | None = None) -> frozenset[str]:
    return frozenset(line.casefold() for line in _read_lines(path, "header_names.txt"))


def load_abbreviations(path: str | Path | None = None) -> dict[str, tuple[str, ...]]:
    """Read ``short<TAB>expanded`` lines into ``{short: expanded tokens}``."""
    out = {}
    for line in _read_lines(path, "abbreviations.tsv"):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"malformed abbreviation line: {line!r}")
        short, expanded = parts[0].strip().casefold(), parts[1].strip().casefold()
        out[short] = tuple(expanded.split())
    return out


def coarse_pos(word: str) -> str | None:
    """Tagger-free POS guess covering the classes antonym swaps care about."""
    word = word.casefold()
    if word in _CLOSED_POS:
        return _CLOSED_POS[word]
    if word in _SUFFIX_EXCEPTIONS or not word.isalpha():
        return None
    if len(word) > 4 and word.endswith("est"):
        return "superlative"
    if len(word) > 4 and word.endswith("er"):
        return "comparative"
    return None


@dataclass(frozen=True)
class AntonymLexicon:
    entries: tuple[tuple[str, str, str], ...]
    _lookup: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_entries(cls, entries) -> "AntonymLexicon":
        lookup = {}
        clean = []
        for word, antonym, pos in entries:
            word, antonym, pos = word.casefold(), antonym.casefold(), pos.casefold()
            if pos not in POS_TAGS:
                raise ValueError(f"unknown pos tag {pos!r} for {word!r}")
            clean.append((word, antonym, pos))
            lookup.setdefault(word, (antonym, pos))
        for word, antonym, pos in clean:
            lookup.setdefault(antonym, (word, pos))
        return cls(tuple(clean), lookup)

    def antonym(self, word: str) -> str | None:
        """Antonym of ``word`` if the heuristic POS agrees with the entry's tag."""
        hit = self._lookup.get(word.casefold())
        if hit is None:
            return None
        antonym, pos = hit
        if coarse_pos(word) != pos:
            return None
        return antonym


def load_antonyms(path: str | Path | None = None) -> AntonymLexicon:
    entries = []
    for line in _read_lines(path, "antonyms.tsv"):
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) != 3:
            raise ValueError(f"malformed antonym line: {line!r}")
        entries.append(tuple(parts))
    return AntonymLexicon.from_entries(entries)
