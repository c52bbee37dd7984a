"""Exception hierarchy shared across the engine."""


class RecastError(Exception):
    """Base class for all engine errors."""


class TableStructureError(RecastError, ValueError):
    """Malformed raw table (ragged rows, empty header names, ...)."""


class NonReplaceableError(RecastError):
    """A header or aggregate cell was used as a substitution source."""


class SqlError(RecastError):
    """Base class for query parsing and execution failures."""


class UnsupportedSyntaxError(SqlError):
    pass


class ColumnResolutionError(SqlError):
    def __init__(self, name, candidates):
        self.name = name
        self.candidates = list(candidates)
        hint = ", ".join(self.candidates) if self.candidates else "none"
        super().__init__(f"unknown column {name!r} (candidates: {hint})")


class QueryTypeError(SqlError):
    pass


class EmptyResultError(SqlError):
    pass


class SkeletonError(RecastError):
    pass


class CounterfactualError(RecastError):
    pass


class PluginProtocolError(RecastError):
    """Plugin answered with a response that violates the line protocol."""
