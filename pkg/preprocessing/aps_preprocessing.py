"""
APS-style corpus ingest.

Two CSV files with a header row:
  metadata: external_id,pub_date   (pub_date as YYYY-MM or YYYY-MM-DD; the day is dropped)
  edges:    citing_id,cited_id
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, List, Set, Tuple

import numpy as np
import pandas as pd

from core.errors import IngestError
from network.citation_graph import CitationGraph, PaperRecord, build_graph
from network.months import EPOCH_YEAR, MAX_MONTH
from pydantic_models.report_models import CorpusStats

logger = logging.getLogger(__name__)

METADATA_COLUMNS = ["external_id", "pub_date"]
EDGE_COLUMNS = ["citing_id", "cited_id"]
# Papers dated after this month are kept but counted in flagged_out_of_range
LAST_DESCRIBED_MONTH = (2017 - EPOCH_YEAR) * 12 + 11


def _leading_comment_lines(path: Path) -> int:
    # Files written by this tool start with a "# {metadata}" line
    count = 0
    with path.open('r', encoding='utf-8') as f:
        for line in f:
            if not line.startswith('#'):
                break
            count += 1
    return count


def _read_table(path: str | Path, columns: List[str]) -> pd.DataFrame:
    abs_path = Path(path).resolve()
    if not abs_path.exists():
        raise IngestError(f"The input file was not found at: {abs_path}\nPlease ensure the file exists and the path is correct.")
    try:
        frame = pd.read_csv(
            abs_path, dtype=str, keep_default_na=False, encoding="utf-8", skiprows=_leading_comment_lines(abs_path)
        )
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise IngestError(f"Could not parse {abs_path}: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise IngestError(f"{abs_path} is empty; expected header {','.join(columns)}") from e
    header = [c.strip() for c in frame.columns]
    if header[: len(columns)] != columns:
        raise IngestError(f"Malformed header in {abs_path}: expected '{','.join(columns)}', got '{','.join(header)}'")
    frame.columns = header
    return frame[columns].apply(lambda col: col.str.strip())


def _parse_months(dates: pd.Series) -> pd.Series:
    """Month stamps (float, NaN when invalid) from YYYY-MM or YYYY-MM-DD strings."""
    full = pd.to_datetime(dates.where(dates.str.len() == 10), format="%Y-%m-%d", errors="coerce")
    short = pd.to_datetime(dates.where(dates.str.len() == 7), format="%Y-%m", errors="coerce")
    parsed = full.fillna(short)
    return (parsed.dt.year - EPOCH_YEAR) * 12 + (parsed.dt.month - 1)


def parse_metadata(path: str | Path) -> Tuple[List[PaperRecord], CorpusStats]:
    frame = _read_table(path, METADATA_COLUMNS)
    raw = len(frame)

    months = _parse_months(frame["pub_date"])
    # "Incomplete" means a missing id or a missing/invalid date; dates before the month epoch are unrepresentable
    complete = (frame["external_id"] != "") & months.notna() & (months >= 0) & (months <= MAX_MONTH)
    kept = pd.DataFrame({"external_id": frame["external_id"][complete], "pub_month": months[complete].astype(np.int64)})
    dropped_incomplete = int(raw - len(kept))

    # Repeated ids: keep the earliest month, independent of row order
    kept = kept.sort_values(["external_id", "pub_month"], kind="mergesort")
    repeated = kept["external_id"].duplicated()
    dropped_duplicate_ids = int(repeated.sum())
    kept = kept[~repeated]

    flagged = int((kept["pub_month"] > LAST_DESCRIBED_MONTH).sum())
    if dropped_incomplete:
        logger.warning(f"parse_metadata: dropped {dropped_incomplete} row(s) with incomplete information")
    if dropped_duplicate_ids:
        logger.warning(f"parse_metadata: dropped {dropped_duplicate_ids} repeated external_id row(s)")
    if flagged:
        logger.warning(f"parse_metadata: {flagged} paper(s) dated after 2017-12 kept and flagged")

    records = [PaperRecord(i, int(m)) for i, m in zip(kept["external_id"], kept["pub_month"])]
    stats = CorpusStats(
        raw_paper_count=raw,
        kept_paper_count=len(records),
        dropped_incomplete=dropped_incomplete,
        dropped_duplicate_ids=dropped_duplicate_ids,
        flagged_out_of_range=flagged,
    )
    logger.info(f"parse_metadata: kept {len(records)} of {raw} papers")
    return records, stats


def parse_edges(path: str | Path, known_ids: Iterable[str] | Set[str]) -> Tuple[List[Tuple[str, str]], CorpusStats]:
    frame = _read_table(path, EDGE_COLUMNS)
    raw = len(frame)
    known = known_ids if isinstance(known_ids, (set, frozenset)) else set(known_ids)

    present = frame["citing_id"].isin(known) & frame["cited_id"].isin(known)
    dropped_unknown = int((~present).sum())
    frame = frame[present]

    loops = frame["citing_id"] == frame["cited_id"]
    dropped_loops = int(loops.sum())
    frame = frame[~loops]

    repeated = frame.duplicated(subset=EDGE_COLUMNS)
    dropped_dupes = int(repeated.sum())
    frame = frame[~repeated]

    if frame.empty:
        raise IngestError(f"No usable citation left in {path} after cleaning ({raw} raw rows)")
    if dropped_unknown:
        logger.warning(f"parse_edges: dropped {dropped_unknown} pair(s) with an unknown or dropped endpoint")

    edges = list(zip(frame["citing_id"], frame["cited_id"]))
    stats = CorpusStats(
        raw_edge_count=raw,
        kept_edge_count=len(edges),
        dropped_self_loops=dropped_loops,
        dropped_duplicates=dropped_dupes,
        dropped_unknown_endpoint=dropped_unknown,
    )
    logger.info(f"parse_edges: kept {len(edges)} of {raw} citations")
    return edges, stats


def load_corpus(metadata_path: str | Path, edges_path: str | Path) -> Tuple[CitationGraph, CorpusStats]:
    records, paper_stats = parse_metadata(metadata_path)
    edges, edge_stats = parse_edges(edges_path, {r.external_id for r in records})
    graph = build_graph(records, edges)
    return graph, paper_stats.merge(edge_stats)
