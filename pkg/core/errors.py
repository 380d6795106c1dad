from __future__ import annotations


class CitePopError(Exception):
    """Base error. `exit_code` is what the CLI returns when this escapes a command."""

    exit_code: int = 1


class ParameterError(CitePopError, ValueError):
    exit_code = 2


class GraphBuildError(CitePopError, ValueError):
    pass


class EmptySnapshotError(CitePopError, ValueError):
    pass


class IngestError(CitePopError, ValueError):
    pass


class EvaluationError(CitePopError, ValueError):
    pass


class ConvergenceError(CitePopError, RuntimeError):
    exit_code = 3
