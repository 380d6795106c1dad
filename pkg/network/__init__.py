from network.months import MonthStamp, month_from_string, month_to_string, validate_month
from network.citation_graph import CitationGraph, PaperRecord, build_graph
from network.snapshot import GraphSnapshot, snapshot

__all__ = [
    "MonthStamp",
    "month_from_string",
    "month_to_string",
    "validate_month",
    "CitationGraph",
    "PaperRecord",
    "build_graph",
    "GraphSnapshot",
    "snapshot",
]
