"""Plot-ready long-form tables for the comparison figures, computed from one set of rankings."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

from core.log import banner
from evaluation.age_bias import cumulative_age_distribution, detection_rate_by_age, ranking_scatter
from evaluation.metrics import evaluate, top_count, top_set
from evaluation.popularity import FuturePopularity
from network.snapshot import GraphSnapshot
from pydantic_models.report_models import AgeBinStats, EvalReport, SweepSurface, TimeAveragedCurve
from rankers import METHODS, ScoreVector, rank_snapshot

logger = logging.getLogger(__name__)


@dataclass
class FigureBundle:
    reports: Dict[str, EvalReport]
    age_stats: Dict[str, AgeBinStats]
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    params: Dict[str, Dict] = field(default_factory=dict)


def surface_table(surface: SweepSurface) -> pd.DataFrame:
    rows = [
        {"tau": c.tau, "alpha": c.alpha, "metric": m, "value": c.report.metric(m)}
        for c in surface.cells
        for m in surface.metrics
    ]
    return pd.DataFrame(rows, columns=["tau", "alpha", "metric", "value"])


def curves_table(curves: Sequence[TimeAveragedCurve]) -> pd.DataFrame:
    rows = [
        {"T_f": tf, "method": c.method_tag, "metric": m, "value": values[k]}
        for c in curves
        for m, values in c.curves.items()
        for k, tf in enumerate(c.T_f_list)
    ]
    return pd.DataFrame(rows, columns=["T_f", "method", "metric", "value"])


def build_figure_bundle(
    snap: GraphSnapshot,
    future: FuturePopularity,
    params: Dict[str, Optional[BaseModel]],
    fraction: float = 0.01,
    bin_width: int = 60,
    cdf_bin_width: int = 12,
    methods: Sequence[str] = METHODS,
) -> FigureBundle:
    """
    Rank once per method, then derive the ranking scatter (AD vs each other method), per-bin mean
    rank difference, top-set age distributions and per-bin detection rates.
    """
    banner(logger, f"FIGURES START methods={list(methods)}")
    scores: Dict[str, ScoreVector] = {m: rank_snapshot(snap, m, params.get(m)) for m in methods}
    n = top_count(snap.n_nodes, fraction)
    ids = snap.ids
    age = snap.age

    reports = {m: evaluate(s, future, fraction) for m, s in scores.items()}
    age_stats = {
        m: detection_rate_by_age(s, future, age, fraction, bin_width, method_tag=m) for m, s in scores.items()
    }
    tables: Dict[str, pd.DataFrame] = {}

    if "ad" in scores:
        for m in methods:
            if m != "ad":
                tables[f"scatter_{m}"] = ranking_scatter(scores["ad"], scores[m], future, fraction)

    tables["delta_r_by_age"] = pd.DataFrame(
        [
            {"age_bin": b.age_lo, "method": m, "mean_delta_r": b.mean_delta_r}
            for m, st in age_stats.items()
            for b in st.bins
            if b.rate_defined
        ],
        columns=["age_bin", "method", "mean_delta_r"],
    )
    tables["detection_rate_by_age"] = pd.DataFrame(
        [
            {"age_bin": b.age_lo, "method": m, "rate": b.rate}
            for m, st in age_stats.items()
            for b in st.bins
            if b.rate_defined
        ],
        columns=["age_bin", "method", "rate"],
    )

    max_age = int(age.max())
    top_sets = {"real": top_set(future, n, ids)}
    top_sets.update({m: s.order()[:n] for m, s in scores.items()})
    frames: List[pd.DataFrame] = []
    for label, members in top_sets.items():
        curve = cumulative_age_distribution(age[members], cdf_bin_width, max_age)
        curve.insert(1, "method", label)
        frames.append(curve)
    tables["age_cdf"] = pd.concat(frames, ignore_index=True)

    return FigureBundle(
        reports=reports,
        age_stats=age_stats,
        tables=tables,
        params={m: s.params for m, s in scores.items()},
    )
