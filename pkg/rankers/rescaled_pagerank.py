from __future__ import annotations

from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from core.errors import ParameterError
from network.snapshot import GraphSnapshot
from pydantic_models.params_models import RescaleParams
from rankers.score import ScoreVector

# upper bound on window elements materialized per block
_BLOCK_ELEMENTS = 1 << 22


def publication_order(snap: GraphSnapshot) -> np.ndarray:
    """Newest paper first; papers of the same month by external id ascending."""
    return np.lexsort((snap.ids, -snap.pub_month))


def _window_stats(windows: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # one window per row, two-pass mean and population std from the members themselves
    mu = windows.mean(axis=1)
    sigma = np.sqrt(np.square(windows - mu[:, None]).mean(axis=1))
    flat = (windows.max(axis=1) == windows.min(axis=1)) | (sigma == 0.0)
    return mu, sigma, flat


def rescale_ordered(scores: np.ndarray, delta_p: int) -> np.ndarray:
    """
    z-score of each entry against positions [i - delta_p/2, i + delta_p/2], clamped to the list.

    Windows shrink at the ends. Population standard deviation; a window whose members are all
    equal scores 0.
    """
    p = np.asarray(scores, dtype=float)
    n = p.shape[0]
    half = delta_p // 2
    width = 2 * half + 1
    mu = np.empty(n)
    sigma = np.empty(n)
    flat = np.empty(n, dtype=bool)

    # clamped windows near either end
    for i in range(n):
        if half <= i <= n - 1 - half:
            continue
        lo, hi = max(0, i - half), min(n, i + half + 1)
        m, s, f = _window_stats(p[None, lo:hi])
        mu[i], sigma[i], flat[i] = m[0], s[0], f[0]

    if n >= width:
        # row k of the view is the full window centred on k + half
        windows = sliding_window_view(p, width)
        step = max(1, _BLOCK_ELEMENTS // width)
        for start in range(0, windows.shape[0], step):
            block = windows[start:start + step]
            centre = slice(start + half, start + half + block.shape[0])
            mu[centre], sigma[centre], flat[centre] = _window_stats(block)

    z = np.zeros(n)
    np.divide(p - mu, sigma, out=z, where=~flat)
    return z


def rescaled_pagerank(snap: GraphSnapshot, pr: ScoreVector, params: RescaleParams = RescaleParams()) -> ScoreVector:
    if snap.n_nodes < 2:
        raise ParameterError("Rescaled PageRank needs at least 2 papers")
    if pr.method_tag != "pr" or len(pr) != snap.n_nodes:
        raise ParameterError("Rescaled PageRank expects a PageRank ScoreVector computed on the same snapshot")

    order = publication_order(snap)
    z_ordered = rescale_ordered(pr.values[order], params.delta_p)
    z = np.empty_like(z_ordered)
    z[order] = z_ordered
    return ScoreVector(z, snap.ids, "rs", params.model_dump(), pr.converged, pr.n_steps)
