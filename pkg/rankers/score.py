from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd


def ranking_order(values: np.ndarray, ids: Optional[np.ndarray] = None) -> np.ndarray:
    """Indices sorted by the total order: value descending, then external id (or position) ascending."""
    values = np.asarray(values, dtype=float)
    tiebreak = np.arange(values.shape[0]) if ids is None else np.asarray(ids, dtype=str)
    return np.lexsort((tiebreak, -values))


def ranking_positions(values: np.ndarray, ids: Optional[np.ndarray] = None) -> np.ndarray:
    """1-based rank of every entry under the total order."""
    order = ranking_order(values, ids)
    positions = np.empty(order.shape[0], dtype=np.int64)
    positions[order] = np.arange(1, order.shape[0] + 1)
    return positions


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Prediction scores aligned to a snapshot's node indexing."""
    values: np.ndarray
    ids: np.ndarray
    method_tag: str
    params: Dict[str, Any] = field(default_factory=dict)
    converged: bool = True
    n_steps: int = 0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("ScoreVector.values must be one-dimensional")
        if values.shape[0] != len(self.ids):
            raise ValueError(f"ScoreVector length {values.shape[0]} does not match {len(self.ids)} ids")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"ScoreVector from '{self.method_tag}' contains non-finite values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def order(self) -> np.ndarray:
        return ranking_order(self.values, self.ids)

    def ranks(self) -> np.ndarray:
        return ranking_positions(self.values, self.ids)

    def to_frame(self) -> pd.DataFrame:
        """`external_id,score,rank` rows sorted by the total order."""
        order = self.order()
        return pd.DataFrame(
            {
                "external_id": self.ids[order],
                "score": self.values[order],
                "rank": np.arange(1, order.shape[0] + 1),
            }
        )
