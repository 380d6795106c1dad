from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp

from network.snapshot import GraphSnapshot
from pydantic_models.params_models import PageRankParams
from rankers.score import ScoreVector

logger = logging.getLogger(__name__)


def out_degree_transfer(snap: GraphSnapshot) -> sp.csr_matrix:
    """W with w_ij = 1/k_j^out when j cites i; columns of papers without references are zero."""
    k_out = snap.out_degree.astype(float)
    inv = np.divide(1.0, k_out, out=np.zeros_like(k_out), where=k_out > 0)
    return (snap.reverse @ sp.diags(inv)).tocsr()


def pagerank(snap: GraphSnapshot, params: PageRankParams = PageRankParams()) -> ScoreVector:
    """
    Power iteration of PageRank on the citation graph.

    Papers without references spread their whole score uniformly over all N papers, and every
    paper receives the (1 - c)/N teleport share. The result sums to 1.
    """
    n = snap.n_nodes
    transfer = out_degree_transfer(snap)
    dangling = snap.out_degree == 0
    c = params.c

    s = np.full(n, 1.0 / n)
    converged = False
    steps = 0
    for steps in range(1, params.max_iter + 1):
        dangling_mass = float(s[dangling].sum())
        s_next = c * (transfer @ s + dangling_mass / n) + (1.0 - c) / n
        s_next /= s_next.sum()
        change = float(np.abs(s_next - s).sum())
        s = s_next
        if change < params.tol:
            converged = True
            break

    if not converged:
        logger.warning(f"pagerank: L1 change still above tol={params.tol} after {params.max_iter} iterations")
    return ScoreVector(s, snap.ids, "pr", params.model_dump(), converged, steps)
