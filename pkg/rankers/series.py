from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesResult:
    values: np.ndarray
    converged: bool
    n_terms: int


def truncated_series(
    transfer: sp.csr_matrix,
    seed: np.ndarray,
    step_coefficient: Callable[[int], float],
    tol: float,
    max_terms: int,
) -> SeriesResult:
    """
    Accumulate S = seed + sum_k (prod_{i<=k} a_i) W^k seed, where a_i = step_coefficient(i).

    Stops after the k-th term once its L1 mass is below `tol` times the accumulated mass,
    or after `max_terms` path terms (converged=False).
    """
    total = np.array(seed, dtype=float)
    term = total.copy()
    for k in range(1, max_terms + 1):
        term = step_coefficient(k) * (transfer @ term)
        total += term
        term_mass = float(np.abs(term).sum())
        if term_mass == 0.0 or term_mass < tol * float(np.abs(total).sum()):
            return SeriesResult(total, True, k)
    logger.warning(f"truncated_series: no convergence within {max_terms} terms")
    return SeriesResult(total, False, max_terms)
