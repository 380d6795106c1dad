from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.sparse as sp

from core.errors import GraphBuildError
from network.months import MonthStamp, validate_month

logger = logging.getLogger(__name__)

Edge = Tuple[str, str]  # citing external_id, cited external_id


@dataclass(frozen=True)
class PaperRecord:
    external_id: str
    pub_month: MonthStamp

    def __post_init__(self):
        if not self.external_id:
            raise GraphBuildError("PaperRecord.external_id must be nonempty")
        validate_month(self.pub_month)


def _freeze(matrix: sp.csr_matrix) -> sp.csr_matrix:
    for arr in (matrix.data, matrix.indices, matrix.indptr):
        arr.flags.writeable = False
    return matrix


@dataclass(frozen=True, eq=False)
class CitationGraph:
    """
    Immutable citation network. Nodes are densely indexed in ascending external id order.

    `forward[i, j] == 1` when paper i cites paper j (row = citing). `reverse` is its transpose
    (row = cited, columns = citers).
    """
    ids: np.ndarray
    pub_month: np.ndarray
    forward: sp.csr_matrix
    reverse: sp.csr_matrix
    id_index: pd.Index = field(repr=False)
    dropped_self_loops: int = 0
    dropped_duplicates: int = 0

    @property
    def n_nodes(self) -> int:
        return int(self.ids.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.forward.nnz)

    @property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.forward.indptr)

    @property
    def in_degree(self) -> np.ndarray:
        return np.diff(self.reverse.indptr)

    @property
    def first_month(self) -> MonthStamp:
        return int(self.pub_month.min())

    @property
    def last_month(self) -> MonthStamp:
        return int(self.pub_month.max())

    def edge_list(self) -> List[Edge]:
        coo = self.forward.tocoo()
        return [(self.ids[i], self.ids[j]) for i, j in zip(coo.row, coo.col)]


def build_graph(records: Sequence[PaperRecord], edges: Iterable[Edge]) -> CitationGraph:
    """
    Build the immutable graph. Self-loops and repeated edges are dropped and counted;
    an unknown endpoint or a repeated record id is rejected.
    """
    if not records:
        raise GraphBuildError("Cannot build a graph without paper records")

    frame = pd.DataFrame(
        {"external_id": [r.external_id for r in records], "pub_month": [int(r.pub_month) for r in records]}
    )
    dupes = frame["external_id"][frame["external_id"].duplicated()]
    if not dupes.empty:
        raise GraphBuildError(f"Duplicate external_id in records: '{dupes.iloc[0]}' ({len(dupes)} duplicates)")

    frame = frame.sort_values("external_id", kind="mergesort").reset_index(drop=True)
    ids = frame["external_id"].to_numpy(dtype=str)
    pub_month = frame["pub_month"].to_numpy(dtype=np.int64)
    id_index = pd.Index(ids)
    n = ids.shape[0]

    pairs = pd.DataFrame(list(edges), columns=["citing", "cited"], dtype=object)
    citing = id_index.get_indexer(pairs["citing"]) if len(pairs) else np.empty(0, dtype=np.int64)
    cited = id_index.get_indexer(pairs["cited"]) if len(pairs) else np.empty(0, dtype=np.int64)
    unknown = (citing < 0) | (cited < 0)
    if unknown.any():
        row = int(np.flatnonzero(unknown)[0])
        pair = (pairs["citing"].iloc[row], pairs["cited"].iloc[row])
        raise GraphBuildError(f"Edge references an unknown external_id: {pair}")

    loops = citing == cited
    n_loops = int(loops.sum())
    if n_loops:
        logger.warning(f"build_graph: dropped {n_loops} self-loop(s)")
    citing = citing[~loops].astype(np.int64)
    cited = cited[~loops].astype(np.int64)

    # Canonical edge order: unique (citing, cited) codes, ascending
    codes = np.unique(citing * n + cited)
    n_dupes = int(citing.shape[0] - codes.shape[0])
    rows, cols = np.divmod(codes, n)

    forward = sp.csr_matrix((np.ones(codes.shape[0]), (rows, cols)), shape=(n, n))
    forward.sort_indices()
    reverse = forward.T.tocsr()
    reverse.sort_indices()

    for arr in (ids, pub_month):
        arr.flags.writeable = False

    logger.info(f"build_graph: {n} nodes, {forward.nnz} edges (self-loops dropped={n_loops}, duplicates dropped={n_dupes})")
    return CitationGraph(
        ids=ids,
        pub_month=pub_month,
        forward=_freeze(forward),
        reverse=_freeze(reverse),
        id_index=id_index,
        dropped_self_loops=n_loops,
        dropped_duplicates=n_dupes,
    )
