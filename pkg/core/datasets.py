from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Tuple

from core.config_loader import section
from core.errors import ParameterError
from network.citation_graph import CitationGraph
from pydantic_models.report_models import CorpusStats

Corpus = Tuple[CitationGraph, CorpusStats]


@dataclass
class CorpusPlugin:
    name: str
    load: Callable[[Dict], Corpus]  # takes config dict -> (graph, stats)


# ---- APS-style CSV files -----------------------------------------------------

def _aps_load(cfg: Dict) -> Corpus:
    from preprocessing.aps_preprocessing import load_corpus

    paths = section(cfg, 'paths')
    metadata, edges = paths.get('metadata_csv'), paths.get('edges_csv')
    if not metadata or not edges:
        raise ParameterError("Missing 'paths.metadata_csv' and/or 'paths.edges_csv' (or --metadata/--edges) for the APS corpus")
    return load_corpus(metadata, edges)


# ---- Synthetic corpus generated in-process -----------------------------------

def _synth_load(cfg: Dict) -> Corpus:
    from pydantic import ValidationError

    from pydantic_models.params_models import SynthParams
    from synthgen.generator import generate

    try:
        params = SynthParams(**section(cfg, 'synth'))
    except ValidationError as e:
        raise ParameterError(f"Invalid synth parameters: {e}") from e
    corpus = generate(params)
    graph = corpus.to_graph()
    stats = CorpusStats(
        raw_paper_count=graph.n_nodes,
        kept_paper_count=graph.n_nodes,
        raw_edge_count=len(corpus.edges),
        kept_edge_count=graph.n_edges,
    )
    return graph, stats


# ---- Registry ----------------------------------------------------------------

_REGISTRY: Dict[str, CorpusPlugin] = {
    'APS': CorpusPlugin('APS', _aps_load),
    'SYNTH': CorpusPlugin('SYNTH', _synth_load),
}


def get_corpus_plugin(dataset_name: str) -> CorpusPlugin:
    key = (dataset_name or '').strip().upper()
    if key not in _REGISTRY:
        raise KeyError(f"Unknown dataset '{dataset_name}'. Available: {', '.join(_REGISTRY.keys())}")
    return _REGISTRY[key]
