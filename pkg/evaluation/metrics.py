from __future__ import annotations

import math
from typing import Any, NamedTuple, Optional, Tuple

import numpy as np
from scipy.stats import rankdata

from core.errors import EvaluationError
from evaluation.popularity import FuturePopularity
from pydantic_models.report_models import EvalReport
from rankers.score import ScoreVector, ranking_order


class Correlation(NamedTuple):
    value: float
    degenerate: bool


def _values(x: Any) -> np.ndarray:
    return np.asarray(getattr(x, 'values', x), dtype=float)


def _shared_ids(s: Any, f: Any) -> Optional[np.ndarray]:
    s_ids = getattr(s, 'ids', None)
    f_ids = getattr(f, 'ids', None)
    if s_ids is not None and f_ids is not None and not np.array_equal(s_ids, f_ids):
        raise EvaluationError("Scores and future popularity are not aligned to the same papers")
    return s_ids if s_ids is not None else f_ids


def _pair(s: Any, f: Any) -> Tuple[np.ndarray, np.ndarray]:
    a, b = _values(s), _values(f)
    if a.shape != b.shape:
        raise EvaluationError(f"Length mismatch: {a.shape[0]} scores vs {b.shape[0]} popularity values")
    if a.shape[0] < 2:
        raise EvaluationError("Correlation needs at least 2 papers")
    return a, b


def _population_pearson(a: np.ndarray, b: np.ndarray) -> Correlation:
    da = a - a.mean()
    db = b - b.mean()
    ss_a = float(np.dot(da, da))
    ss_b = float(np.dot(db, db))
    if ss_a == 0.0 or ss_b == 0.0 or np.all(a == a[0]) or np.all(b == b[0]):
        return Correlation(0.0, True)
    r = float(np.dot(da, db)) / math.sqrt(ss_a * ss_b)
    return Correlation(min(1.0, max(-1.0, r)), False)


def pearson(s: Any, f: Any) -> Correlation:
    """Population Pearson coefficient. A constant input gives (0.0, degenerate=True)."""
    return _population_pearson(*_pair(s, f))


def average_ranks(values: Any) -> np.ndarray:
    """Ascending ranks; tied values share the mean of their positions."""
    return rankdata(_values(values), method='average')


def spearman(s: Any, f: Any) -> Correlation:
    a, b = _pair(s, f)
    return _population_pearson(average_ranks(a), average_ranks(b))


def top_count(n_papers: int, fraction: float = 0.01) -> int:
    if not 0.0 < fraction <= 1.0:
        raise EvaluationError(f"fraction must be in (0, 1], got {fraction}")
    n = int(math.floor(fraction * n_papers))
    if n < 1:
        raise EvaluationError(
            f"Top fraction {fraction} of {n_papers} papers selects no paper; raise the fraction to at least {1.0 / n_papers:.6g}"
        )
    return n


def top_set(x: Any, n: int, ids: Optional[np.ndarray] = None) -> np.ndarray:
    """Indices of the first `n` entries under the total order."""
    return ranking_order(_values(x), ids)[:n]


def precision_at_top(s: Any, f: Any, fraction: float = 0.01, n_top: Optional[int] = None) -> Tuple[float, int]:
    """P_n = D_n / n with D_n the overlap of the predicted and the real top-n sets."""
    a, b = _pair(s, f)
    ids = _shared_ids(s, f)
    n = top_count(a.shape[0], fraction) if n_top is None else int(n_top)
    if not 1 <= n <= a.shape[0]:
        raise EvaluationError(f"n_top must be within [1, {a.shape[0]}], got {n}")
    hits = np.intersect1d(top_set(a, n, ids), top_set(b, n, ids)).shape[0]
    return hits / n, n


def evaluate(score: ScoreVector, future: FuturePopularity, fraction: float = 0.01, n_top: Optional[int] = None) -> EvalReport:
    """Pearson, Spearman and top-fraction precision of one ranking against the real future popularity."""
    r = pearson(score, future)
    rho = spearman(score, future)
    precision, n = precision_at_top(score, future, fraction, n_top)
    return EvalReport(
        method_tag=score.method_tag,
        t=future.t,
        T_f=future.T_f,
        pearson=r.value,
        spearman=rho.value,
        precision=precision,
        n_top=n,
        n_papers=len(score),
        convergence_ok=score.converged,
        pearson_degenerate=r.degenerate,
        spearman_degenerate=rho.degenerate,
        params=dict(score.params),
    )
