from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from network.snapshot import GraphSnapshot
from pydantic_models.params_models import AgeDiffusionParams
from rankers.citerank import seed_vector
from rankers.score import ScoreVector
from rankers.series import truncated_series


def age_transfer(snap: GraphSnapshot, tau: float) -> sp.csr_matrix:
    """W with w_ij = exp(-age_j / tau) when j cites i. Not divided by the out-degree."""
    weights = np.exp(-snap.age.astype(float) / tau)
    return (snap.reverse @ sp.diags(weights)).tocsr()


def step_coefficients(params: AgeDiffusionParams, count: int) -> np.ndarray:
    """alpha_i for i = 1..count."""
    steps = np.arange(count, dtype=float)
    return params.alpha / params.step_decay_base ** steps


def age_diffusion(snap: GraphSnapshot, params: AgeDiffusionParams = AgeDiffusionParams()) -> ScoreVector:
    """
    Age-based diffusion score: S = rho + a1 W rho + a1 a2 W^2 rho + ...

    Every reference of a citing paper receives the full, age-discounted share of its score, and
    the follow probability shrinks by `step_decay_base` at each further step.
    """
    rho = seed_vector(snap, params.tau).values
    transfer = age_transfer(snap, params.tau)
    alphas = step_coefficients(params, params.max_terms)
    result = truncated_series(transfer, rho, lambda k: alphas[k - 1], params.tol, params.max_terms)
    return ScoreVector(result.values, snap.ids, "ad", params.model_dump(), result.converged, result.n_terms)
