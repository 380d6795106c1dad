from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from core.errors import EmptySnapshotError, ParameterError
from network.citation_graph import CitationGraph, _freeze
from network.months import MonthStamp, month_to_string, validate_month

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GraphSnapshot:
    """
    Training view of a CitationGraph at testing time `t`.

    `nodes[k]` is the parent-graph index of snapshot node k; snapshot indices keep the parent's
    ascending external id order. Adjacency is restricted to included nodes and re-indexed densely.
    """
    parent: CitationGraph
    t: MonthStamp
    nodes: np.ndarray
    age: np.ndarray
    forward: sp.csr_matrix
    reverse: sp.csr_matrix
    filter_uncited: bool

    @property
    def n_nodes(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.forward.nnz)

    @property
    def ids(self) -> np.ndarray:
        return self.parent.ids[self.nodes]

    @property
    def pub_month(self) -> np.ndarray:
        return self.parent.pub_month[self.nodes]

    @property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.forward.indptr)

    @property
    def in_degree(self) -> np.ndarray:
        return np.diff(self.reverse.indptr)


def _restrict(matrix: sp.csr_matrix, keep: np.ndarray) -> sp.csr_matrix:
    sub = matrix[keep][:, keep].tocsr()
    sub.sort_indices()
    return sub


def snapshot(graph: CitationGraph, t: MonthStamp, filter_uncited: bool = True) -> GraphSnapshot:
    """
    Restrict `graph` to papers published at or before `t`, then (optionally) drop papers with no
    citation inside that window. The uncited filter is applied once and not iterated.
    """
    t = validate_month(t)
    if t > graph.last_month:
        raise ParameterError(
            f"Testing time {month_to_string(t)} is after the last publication month {month_to_string(graph.last_month)}"
        )

    keep = np.flatnonzero(graph.pub_month <= t)
    if keep.size == 0:
        raise EmptySnapshotError(f"No paper published on or before {month_to_string(t)}")
    forward = _restrict(graph.forward, keep)

    if filter_uncited:
        in_deg = np.diff(forward.tocsc().indptr)
        cited = np.flatnonzero(in_deg > 0)
        if cited.size == 0:
            raise EmptySnapshotError(f"No paper has been cited by {month_to_string(t)}")
        forward = _restrict(forward, cited)
        keep = keep[cited]

    reverse = forward.T.tocsr()
    reverse.sort_indices()
    age = t - graph.pub_month[keep]
    for arr in (keep, age):
        arr.flags.writeable = False

    logger.info(
        f"snapshot t={month_to_string(t)}: {keep.size} nodes, {forward.nnz} edges (filter_uncited={filter_uncited})"
    )
    return GraphSnapshot(
        parent=graph,
        t=t,
        nodes=keep,
        age=age,
        forward=_freeze(forward),
        reverse=_freeze(reverse),
        filter_uncited=filter_uncited,
    )
