import sys
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from network.citation_graph import CitationGraph, PaperRecord, build_graph  # noqa: E402
from network.snapshot import GraphSnapshot, snapshot  # noqa: E402
from pydantic_models.params_models import SynthParams  # noqa: E402
from synthgen.generator import generate  # noqa: E402


def make_graph(months: Dict[str, int], edges: List[Tuple[str, str]]) -> CitationGraph:
    return build_graph([PaperRecord(pid, m) for pid, m in months.items()], edges)


def random_dag(seed: int, max_nodes: int = 50) -> GraphSnapshot:
    """Seeded random citation DAG (newer papers cite older ones), as an unfiltered snapshot at its last month."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_nodes + 1))
    months = np.sort(rng.integers(0, 120, size=n))
    p = rng.uniform(0.05, 0.3)
    ids = [f"P{i:03d}" for i in range(n)]
    edges = [(ids[i], ids[j]) for i in range(n) for j in range(i) if rng.random() < p]
    graph = make_graph(dict(zip(ids, months.tolist())), edges)
    return snapshot(graph, int(months.max()), filter_uncited=False)


@pytest.fixture
def two_node():
    # B cites A
    return snapshot(make_graph({"A": 0, "B": 12}, [("B", "A")]), 12, filter_uncited=False)


@pytest.fixture
def star():
    # C (age 0) cites A and B (age 12)
    return snapshot(make_graph({"A": 0, "B": 0, "C": 12}, [("C", "A"), ("C", "B")]), 12, filter_uncited=False)


@pytest.fixture
def chain_graph():
    # C (month 24) -> B (month 12) -> A (month 0)
    return make_graph({"A": 0, "B": 12, "C": 24}, [("C", "B"), ("B", "A")])


@pytest.fixture(scope="session")
def small_synth_params():
    return SynthParams(n_papers=600, papers_per_month=10, refs_per_paper=5, theta=12, seed=7)


@pytest.fixture(scope="session")
def small_synth_graph(small_synth_params):
    return generate(small_synth_params).to_graph()
