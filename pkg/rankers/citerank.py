from __future__ import annotations

import numpy as np

from core.errors import ParameterError
from network.snapshot import GraphSnapshot
from pydantic_models.params_models import CiteRankParams
from rankers.pagerank import out_degree_transfer
from rankers.score import ScoreVector
from rankers.series import truncated_series


def seed_vector(snap: GraphSnapshot, tau: float) -> ScoreVector:
    """rho_i = exp(-age_i / tau). Left unnormalized."""
    if not tau > 0:
        raise ParameterError(f"tau must be positive, got {tau}")
    rho = np.exp(-snap.age.astype(float) / tau)
    return ScoreVector(rho, snap.ids, "seed", {"tau": tau})


def citerank(snap: GraphSnapshot, params: CiteRankParams = CiteRankParams()) -> ScoreVector:
    """
    CiteRank traffic: S = rho + alpha W rho + alpha^2 W^2 rho + ...

    Score reaching a paper with no references is absorbed.
    """
    rho = seed_vector(snap, params.tau).values
    transfer = out_degree_transfer(snap)
    result = truncated_series(transfer, rho, lambda k: params.alpha, params.tol, params.max_terms)
    return ScoreVector(result.values, snap.ids, "cr", params.model_dump(), result.converged, result.n_terms)
