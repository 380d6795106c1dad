"""
Seeded synthetic citation networks.

Papers arrive in monthly batches. Each new paper cites up to m distinct papers from earlier
months, drawn without replacement with weight (in-degree + 1) * fitness * exp(-age / theta).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from core.utils import build_metadata, ensure_dir, write_csv, write_json
from network.citation_graph import CitationGraph, PaperRecord, build_graph
from network.months import month_to_string, validate_month
from pydantic_models.params_models import SynthParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthCorpus:
    params: SynthParams
    records: List[PaperRecord]
    edges: List[Tuple[str, str]]
    fitness: Dict[str, float]

    def to_graph(self) -> CitationGraph:
        return build_graph(self.records, self.edges)


def _draw_fitness(params: SynthParams, rng: np.random.Generator) -> np.ndarray:
    if params.fitness_distribution == "constant":
        return np.ones(params.n_papers)
    return rng.lognormal(params.fitness_mu, params.fitness_sigma, size=params.n_papers)


def _pick(rng: np.random.Generator, log_weight: np.ndarray, k: int) -> np.ndarray:
    weight = np.exp(log_weight - log_weight.max())
    p = weight / weight.sum()
    positive = np.flatnonzero(p > 0)
    if positive.size >= k:
        return rng.choice(p.shape[0], size=k, replace=False, p=p)
    # weights underflowed: take every positive one, fill up uniformly from the rest
    rest = np.flatnonzero(p == 0)
    return np.concatenate([positive, rng.choice(rest, size=k - positive.size, replace=False)])


def generate(params: SynthParams) -> SynthCorpus:
    rng = np.random.default_rng(params.seed)
    n = params.n_papers
    batch = np.arange(n) // params.papers_per_month
    months = params.start_month + batch
    validate_month(int(months[-1]))
    ids = [f"SYN.{i:06d}" for i in range(n)]

    fitness = _draw_fitness(params, rng)
    log_fitness = np.log(fitness)
    in_degree = np.zeros(n)
    citing: List[int] = []
    cited: List[int] = []

    for i in range(n):
        existing = int(batch[i]) * params.papers_per_month
        k = min(params.refs_per_paper, existing)
        if k == 0:
            continue
        age = (months[i] - months[:existing]).astype(float)
        log_weight = np.log1p(in_degree[:existing]) + log_fitness[:existing] - age / params.theta
        chosen = np.sort(_pick(rng, log_weight, k))
        in_degree[chosen] += 1
        citing.extend([i] * k)
        cited.extend(chosen.tolist())

    records = [PaperRecord(ids[i], int(months[i])) for i in range(n)]
    edges = [(ids[a], ids[b]) for a, b in zip(citing, cited)]
    logger.info(f"synthgen: {n} papers over {int(batch[-1]) + 1} months, {len(edges)} citations (seed={params.seed})")
    return SynthCorpus(params, records, edges, {ids[i]: float(fitness[i]) for i in range(n)})


def write_corpus(corpus: SynthCorpus, directory: Path, metadata: Optional[Dict] = None) -> Dict[str, Path]:
    """Write metadata.csv / edges.csv in the ingest format plus a fitness sidecar JSON."""
    ensure_dir(directory)
    meta = metadata or build_metadata(command="synth", params=corpus.params.model_dump())
    paths = {
        "metadata": directory / "metadata.csv",
        "edges": directory / "edges.csv",
        "fitness": directory / "fitness.json",
    }
    papers = pd.DataFrame(
        {
            "external_id": [r.external_id for r in corpus.records],
            "pub_date": [month_to_string(r.pub_month) for r in corpus.records],
        }
    )
    edges = pd.DataFrame(corpus.edges, columns=["citing_id", "cited_id"])
    write_csv(paths["metadata"], papers, meta)
    write_csv(paths["edges"], edges, meta)
    write_json(paths["fitness"], {"metadata": meta, "fitness": corpus.fitness})
    return paths
