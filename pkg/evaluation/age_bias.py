"""Age-bias diagnostics over the real top set: rank differences, detection rate per age bin, age distributions."""
from __future__ import annotations

from typing import Any, Optional

import numpy as np
import pandas as pd

from core.errors import EvaluationError
from evaluation.metrics import _pair, _shared_ids, _values, top_count, top_set
from pydantic_models.report_models import AgeBin, AgeBinStats
from rankers.score import ranking_positions


def _real_top(s: Any, f: Any, top_fraction: float, n_top: Optional[int]):
    a, b = _pair(s, f)
    ids = _shared_ids(s, f)
    n = top_count(a.shape[0], top_fraction) if n_top is None else int(n_top)
    return a, b, ids, n


def delta_r(s: Any, f: Any, top_fraction: float = 0.01, n_top: Optional[int] = None) -> pd.DataFrame:
    """
    log(r_p) - log(r_f) (natural log) for every paper in the real top set, in real-rank order.
    Positive means the predictor ranks the paper lower than it deserves.
    """
    a, b, ids, n = _real_top(s, f, top_fraction, n_top)
    r_pred = ranking_positions(a, ids)
    r_real = ranking_positions(b, ids)
    real_top = top_set(b, n, ids)
    return pd.DataFrame(
        {
            "index": real_top,
            "external_id": ids[real_top] if ids is not None else real_top.astype(str),
            "r_pred": r_pred[real_top],
            "r_real": r_real[real_top],
            "delta_r": np.log(r_pred[real_top]) - np.log(r_real[real_top]),
        }
    )


def detection_rate_by_age(
    s: Any,
    f: Any,
    ages: Any,
    top_fraction: float = 0.01,
    bin_width: int = 60,
    n_top: Optional[int] = None,
    method_tag: Optional[str] = None,
) -> AgeBinStats:
    """
    Split the real top set into age bins [k*w, (k+1)*w) covering 0..max age of all evaluated papers,
    and report per bin how many of them the predictor also places in its own top set.
    """
    a, b, ids, n = _real_top(s, f, top_fraction, n_top)
    ages = np.asarray(_values(ages), dtype=np.int64)
    if ages.shape != a.shape:
        raise EvaluationError("ages must be aligned with the scores")
    if bin_width < 1:
        raise EvaluationError(f"bin_width must be positive, got {bin_width}")

    real_top = top_set(b, n, ids)
    predicted = np.zeros(a.shape[0], dtype=bool)
    predicted[top_set(a, n, ids)] = True
    shifts = delta_r(s, f, top_fraction, n)["delta_r"].to_numpy()

    n_bins = int(ages.max()) // bin_width + 1
    bin_of = ages[real_top] // bin_width
    bins = []
    for k in range(n_bins):
        members = bin_of == k
        count = int(members.sum())
        detected = int(predicted[real_top[members]].sum())
        bins.append(
            AgeBin(
                age_lo=k * bin_width,
                age_hi=(k + 1) * bin_width,
                count=count,
                detected=detected,
                rate=detected / count if count else None,
                rate_defined=count > 0,
                mean_delta_r=float(shifts[members].mean()) if count else None,
            )
        )
    tag = method_tag or getattr(s, 'method_tag', 'scores')
    return AgeBinStats(method_tag=tag, bin_width=bin_width, n_top=n, bins=bins)


def cumulative_age_distribution(ages: Any, bin_width: int = 12, max_age: Optional[int] = None) -> pd.DataFrame:
    """Survival curve P(age >= x) sampled at multiples of `bin_width`, ending at the first edge where it is 0."""
    ages = np.asarray(_values(ages), dtype=np.int64)
    if ages.size == 0:
        raise EvaluationError("cumulative_age_distribution needs a nonempty set of papers")
    top = int(ages.max()) if max_age is None else max(int(max_age), int(ages.max()))
    edges = np.arange(0, (top // bin_width + 1) * bin_width + 1, bin_width)
    fraction = (ages[None, :] >= edges[:, None]).mean(axis=1)
    return pd.DataFrame({"age": edges, "fraction": fraction})


def ranking_scatter(ad_score: Any, other_score: Any, f: Any, top_fraction: float = 0.01, n_top: Optional[int] = None) -> pd.DataFrame:
    """AD rank against another method's rank for each real top paper: `external_id,rank_ad,rank_other`."""
    a, b, ids, n = _real_top(ad_score, f, top_fraction, n_top)
    other = _values(other_score)
    if other.shape != a.shape:
        raise EvaluationError("Both rankings must cover the same papers")
    real_top = top_set(b, n, ids)
    return pd.DataFrame(
        {
            "external_id": ids[real_top] if ids is not None else real_top.astype(str),
            "rank_ad": ranking_positions(a, ids)[real_top],
            "rank_other": ranking_positions(other, ids)[real_top],
        }
    )
