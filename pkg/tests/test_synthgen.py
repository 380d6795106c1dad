import json

import numpy as np
import pytest
from pydantic import ValidationError

from core.utils import read_csv_metadata
from preprocessing.aps_preprocessing import load_corpus
from pydantic_models.params_models import SynthParams
from synthgen.generator import generate, write_corpus


def test_no_references_gives_edgeless_graph():
    corpus = generate(SynthParams(n_papers=50, papers_per_month=5, refs_per_paper=0))
    assert corpus.edges == []
    assert corpus.to_graph().n_nodes == 50


def test_same_seed_same_corpus(small_synth_params):
    a = generate(small_synth_params)
    b = generate(small_synth_params)
    assert a.records == b.records
    assert a.edges == b.edges
    assert a.fitness == b.fitness
    c = generate(small_synth_params.model_copy(update={"seed": small_synth_params.seed + 1}))
    assert c.edges != a.edges


def test_edge_count_and_distinct_references(small_synth_params):
    p = small_synth_params
    corpus = generate(p)
    expected = sum(min(p.refs_per_paper, (i // p.papers_per_month) * p.papers_per_month) for i in range(p.n_papers))
    assert len(corpus.edges) == expected
    assert len(set(corpus.edges)) == expected


def test_citations_point_backward_in_time(small_synth_graph):
    g = small_synth_graph
    rows, cols = g.forward.nonzero()
    assert (g.pub_month[rows] > g.pub_month[cols]).all()


def test_monthly_batches(small_synth_params, small_synth_graph):
    months, counts = np.unique(small_synth_graph.pub_month, return_counts=True)
    assert months[0] == small_synth_params.start_month
    assert (counts == small_synth_params.papers_per_month).all()


def test_aging_signal(small_synth_params, small_synth_graph):
    # with aging, citations concentrate shortly after publication
    def lags(g):
        rows, cols = g.forward.nonzero()
        return g.pub_month[rows] - g.pub_month[cols]

    ageless = generate(small_synth_params.model_copy(update={"theta": 1e6})).to_graph()
    assert lags(small_synth_graph).mean() < lags(ageless).mean()
    assert np.mean(lags(small_synth_graph) <= 3 * small_synth_params.theta) > 0.8


def test_constant_fitness():
    corpus = generate(SynthParams(n_papers=100, papers_per_month=10, refs_per_paper=3, fitness_distribution="constant"))
    assert set(corpus.fitness.values()) == {1.0}


def test_params_validation():
    with pytest.raises(ValidationError):
        SynthParams(n_papers=5, refs_per_paper=5)
    with pytest.raises(ValidationError):
        SynthParams(theta=0)
    with pytest.raises(ValidationError):
        SynthParams(fitness_distribution="pareto")


def test_written_corpus_round_trips_through_ingest(tmp_path, small_synth_params):
    corpus = generate(small_synth_params)
    paths = write_corpus(corpus, tmp_path / "synth")
    graph, stats = load_corpus(paths["metadata"], paths["edges"])
    original = corpus.to_graph()
    assert graph.ids.tolist() == original.ids.tolist()
    assert graph.pub_month.tolist() == original.pub_month.tolist()
    assert (graph.forward != original.forward).nnz == 0
    assert stats.dropped_incomplete == 0
    assert read_csv_metadata(paths["edges"])["command"] == "synth"
    fitness = json.loads(paths["fitness"].read_text(encoding="utf-8"))
    assert fitness["fitness"] == corpus.fitness


@pytest.mark.slow
def test_in_degree_heavy_tail():
    graph = generate(SynthParams(n_papers=5000, refs_per_paper=10, theta=24, seed=42)).to_graph()
    in_degree = graph.in_degree
    assert in_degree.max() > 20 * np.median(in_degree)
