from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from core.errors import ParameterError
from network.citation_graph import CitationGraph
from network.months import MonthStamp, month_to_string
from network.snapshot import GraphSnapshot


@dataclass(frozen=True, eq=False)
class FuturePopularity:
    """Citations gained by each snapshot paper in (t, t + T_f]."""
    values: np.ndarray
    ids: np.ndarray
    t: MonthStamp
    T_f: int

    def __len__(self) -> int:
        return int(self.values.shape[0])


def future_popularity(graph: CitationGraph, snap: GraphSnapshot, T_f: int) -> FuturePopularity:
    if snap.parent is not graph:
        raise ParameterError("Snapshot was not built from this graph")
    if T_f <= 0:
        raise ParameterError(f"T_f must be a positive number of months, got {T_f}")
    end = snap.t + int(T_f)
    if end > graph.last_month:
        raise ParameterError(
            f"Window end {month_to_string(end)} is after the last publication month {month_to_string(graph.last_month)}"
        )

    reverse = graph.reverse
    cited = np.repeat(np.arange(graph.n_nodes), np.diff(reverse.indptr))
    citer_month = graph.pub_month[reverse.indices]
    in_window = (citer_month > snap.t) & (citer_month <= end)
    counts = np.bincount(cited[in_window], minlength=graph.n_nodes)

    values = counts[snap.nodes].astype(np.int64)
    values.flags.writeable = False
    return FuturePopularity(values, snap.ids, snap.t, int(T_f))
