from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from pydantic import BaseModel

from core.errors import CitePopError, EvaluationError, ParameterError
from core.log import banner
from evaluation.metrics import evaluate
from evaluation.popularity import FuturePopularity, future_popularity
from network.citation_graph import CitationGraph
from network.months import MonthStamp, month_of, month_to_string
from network.snapshot import GraphSnapshot, snapshot
from pydantic_models.report_models import EvalReport, SweepCell, SweepSurface, TimeAveragedCurve
from rankers import build_params, get_ranker, rank_snapshot

logger = logging.getLogger(__name__)

METRICS = ("precision", "spearman", "pearson")
SWEEPABLE = ("cr", "ad")

T = TypeVar("T")
R = TypeVar("R")


def _ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int) -> List[R]:
    # Executor.map yields in submission order, so output order never depends on scheduling
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _check_metrics(metrics: Iterable[str]) -> List[str]:
    metrics = list(metrics)
    unknown = [m for m in metrics if m not in METRICS]
    if unknown or not metrics:
        raise ParameterError(f"Unknown or empty metric list {metrics}. Available: {', '.join(METRICS)}")
    return metrics


def sweep_params(method: str, tau: float, alpha: float, base: Optional[Dict] = None) -> BaseModel:
    values = dict(base or {})
    values.update(tau=tau, alpha=alpha)
    return build_params(method, values)


def parameter_sweep(
    snap: GraphSnapshot,
    future: FuturePopularity,
    method: str,
    tau_grid: Sequence[float],
    alpha_grid: Sequence[float],
    metrics: Iterable[str] = METRICS,
    fraction: float = 0.01,
    base_params: Optional[Dict] = None,
    workers: int = 1,
) -> SweepSurface:
    """
    Evaluate `method` on every (tau, alpha) cell, tau-major. Cells are independent; the best
    cell per metric is the first maximum in grid order.
    """
    method = get_ranker(method).name
    if method not in SWEEPABLE:
        raise ParameterError(f"Only {', '.join(SWEEPABLE)} have (tau, alpha) parameters; got '{method}'")
    if not tau_grid or not alpha_grid:
        raise ParameterError("Parameter grids must be nonempty")
    metrics = _check_metrics(metrics)

    grid = list(product(tau_grid, alpha_grid))
    params = [sweep_params(method, tau, alpha, base_params) for tau, alpha in grid]

    def run_cell(p: BaseModel) -> EvalReport:
        return evaluate(rank_snapshot(snap, method, p), future, fraction)

    banner(logger, f"SWEEP START [{method}] {len(grid)} cells")
    reports = _ordered_map(run_cell, params, workers)
    cells = [SweepCell(tau=float(tau), alpha=float(alpha), report=r) for (tau, alpha), r in zip(grid, reports)]
    not_converged = sum(not c.report.convergence_ok for c in cells)
    if not_converged:
        logger.warning(f"sweep [{method}]: {not_converged} cell(s) did not converge")
    best = {m: select_best(cells, m) for m in metrics}
    return SweepSurface(method_tag=method, metrics=metrics, cells=cells, best=best)


def select_best(cells: Sequence[SweepCell], metric: str) -> SweepCell:
    values = np.array([c.report.metric(metric) for c in cells])
    return cells[int(np.argmax(values))]


def draw_testing_times(
    seed: int,
    count: int = 5,
    start: MonthStamp = month_of(1990, 1),
    end: MonthStamp = month_of(2006, 1),
) -> List[MonthStamp]:
    """Distinct testing months drawn uniformly from [start, end], returned ascending."""
    if end < start:
        raise ParameterError("Testing-time range is empty")
    if count < 1 or count > end - start + 1:
        raise ParameterError(f"Cannot draw {count} distinct months from {end - start + 1}")
    rng = np.random.default_rng(seed)
    drawn = rng.choice(np.arange(start, end + 1), size=count, replace=False)
    return sorted(int(m) for m in drawn)


def multi_time_average(
    graph: CitationGraph,
    times: Sequence[MonthStamp],
    T_f_list: Sequence[int],
    method: str,
    params: Optional[BaseModel] = None,
    metrics: Iterable[str] = METRICS,
    fraction: float = 0.01,
    tau_grid: Optional[Sequence[float]] = None,
    alpha_grid: Optional[Sequence[float]] = None,
    base_params: Optional[Dict] = None,
    filter_uncited: bool = True,
    workers: int = 1,
) -> TimeAveragedCurve:
    """
    Mean of each metric over testing times, one value per T_f.

    With grids (CiteRank / AD only) the parameters are re-chosen for every (metric, T_f): the grid
    cell with the highest time-averaged value of that metric wins.
    """
    method = get_ranker(method).name
    metrics = _check_metrics(metrics)
    if not times or not T_f_list:
        raise ParameterError("multi_time_average needs at least one testing time and one T_f")
    optimize = tau_grid is not None or alpha_grid is not None
    if optimize:
        if method not in SWEEPABLE or not tau_grid or not alpha_grid:
            raise ParameterError("Per-metric optimization needs method cr/ad and two nonempty grids")
        grid = list(product(tau_grid, alpha_grid))
        candidates = [sweep_params(method, tau, alpha, base_params) for tau, alpha in grid]
    else:
        grid = [None]
        candidates = [params if params is not None else build_params(method, base_params)]

    latest = max(times) + max(T_f_list)
    if latest > graph.last_month:
        raise ParameterError(f"Testing time plus T_f reaches {month_to_string(latest)}, beyond the corpus")

    def run_time(t: MonthStamp) -> List[List[EvalReport]]:
        # [candidate][T_f]; the ranking depends only on t, so each candidate is ranked once
        try:
            snap = snapshot(graph, t, filter_uncited)
            futures = [future_popularity(graph, snap, tf) for tf in T_f_list]
        except CitePopError as e:
            raise EvaluationError(f"Evaluation failed at t={month_to_string(t)}: {e}") from e
        out = []
        for cand in candidates:
            row = []
            tf = None
            try:
                score = rank_snapshot(snap, method, cand)
                for tf, fut in zip(T_f_list, futures):
                    row.append(evaluate(score, fut, fraction))
            except CitePopError as e:
                raise EvaluationError(f"Evaluation failed at t={month_to_string(t)}, T_f={tf}: {e}") from e
            out.append(row)
        return out

    banner(logger, f"MULTI-TIME START [{method}] times={[month_to_string(t) for t in times]} T_f={list(T_f_list)}")
    per_time = _ordered_map(run_time, list(times), workers)
    # mean over times -> array [candidate, T_f, metric]
    table = np.array([[[[r.metric(m) for m in metrics] for r in row] for row in res] for res in per_time])
    means = table.mean(axis=0)

    curves: Dict[str, List[float]] = {}
    chosen: Dict[str, List[Optional[Dict[str, float]]]] = {}
    for mi, m in enumerate(metrics):
        best_idx = np.argmax(means[:, :, mi], axis=0)
        curves[m] = [float(means[best_idx[k], k, mi]) for k in range(len(T_f_list))]
        chosen[m] = [
            {"tau": float(grid[i][0]), "alpha": float(grid[i][1])} if grid[i] is not None else None
            for i in best_idx
        ]
    return TimeAveragedCurve(
        method_tag=method,
        times=[int(t) for t in times],
        T_f_list=[int(tf) for tf in T_f_list],
        curves=curves,
        chosen_params=chosen if optimize else {},
        parameter_selection="per_metric_per_T_f" if optimize else "fixed",
    )


def run_single(
    graph: CitationGraph,
    t: MonthStamp,
    T_f: int,
    method: str,
    params: Optional[BaseModel] = None,
    fraction: float = 0.01,
    filter_uncited: bool = True,
) -> Tuple[GraphSnapshot, EvalReport]:
    snap = snapshot(graph, t, filter_uncited)
    fut = future_popularity(graph, snap, T_f)
    return snap, evaluate(rank_snapshot(snap, method, params), fut, fraction)
