"""Recast table-to-text, table QA and semantic-parsing examples into table NLI data."""
from importlib import resources

from .align import align_all, match_cell, normalize_tokens
from .instances import NliInstance
from .tables import Table, parse_table

__version__ = "0.1.0"
__all__ = ["NliInstance", "Table", "align_all", "fixture_path", "match_cell", "normalize_tokens", "parse_table"]


def fixture_path(name: str):
    """Path of a bundled example input, e.g. ``fixture_path("table1_t2tg.jsonl")``."""
    return resources.files(__name__).joinpath("data").joinpath("fixtures").joinpath(name)
