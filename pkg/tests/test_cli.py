import json

import numpy as np
import pandas as pd
import pytest

from evaluation.metrics import evaluate
from evaluation.popularity import future_popularity
from main import run
from network.months import month_of
from network.snapshot import snapshot
from pydantic_models.params_models import AgeDiffusionParams, SynthParams
from rankers import age_diffusion
from synthgen.generator import generate

SYNTH = dict(n_papers=600, papers_per_month=10, refs_per_paper=5, theta=12, seed=7)
CONFIG = """
run:
  dataset: SYNTH
  verbose: false
synth:
  n_papers: 600
  papers_per_month: 10
  refs_per_paper: 5
  theta: 12
  seed: 7
evaluation:
  t: "1964-01"
  tf: 6
"""


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(CONFIG, encoding="utf-8")
    return str(path)


@pytest.fixture(scope="module")
def library_snapshot():
    graph = generate(SynthParams(**SYNTH)).to_graph()
    snap = snapshot(graph, month_of(1964, 1))
    return graph, snap


def _only(directory, pattern):
    matches = sorted(directory.glob(pattern))
    assert len(matches) == 1, matches
    return matches[0]


def test_rank_alpha_zero_returns_seed(config, tmp_path, library_snapshot):
    out = tmp_path / "out"
    assert run(["rank", "--config", config, "--method", "ad", "--tau", "24", "--alpha", "0", "--out-dir", str(out)]) == 0
    scores = pd.read_csv(_only(out, "scores_SYNTH_ad_*.csv"), skiprows=1)
    _, snap = library_snapshot
    expected = dict(zip(snap.ids.tolist(), np.exp(-snap.age / 24.0)))
    assert len(scores) == snap.n_nodes
    np.testing.assert_allclose(scores["score"], [expected[i] for i in scores["external_id"]], rtol=1e-15)
    assert scores["rank"].tolist() == list(range(1, len(scores) + 1))


def test_evaluate_matches_library(config, tmp_path, library_snapshot):
    out = tmp_path / "out"
    argv = ["evaluate", "--config", config, "--method", "ad", "--tau", "24", "--alpha", "0.74", "--out-dir", str(out)]
    assert run(argv) == 0
    payload = json.loads(_only(out, "report_SYNTH_ad_*.json").read_text(encoding="utf-8"))
    graph, snap = library_snapshot
    fut = future_popularity(graph, snap, 6)
    expected = evaluate(age_diffusion(snap, AgeDiffusionParams(tau=24, alpha=0.74)), fut)
    assert payload["report"] == json.loads(expected.model_dump_json())
    assert payload["metadata"]["t"] == "1964-01"


@pytest.mark.parametrize("argv", [
    ["rank", "--method", "ad", "--alpha", "1.5"],
    ["rank", "--method", "cr", "--tau", "-1"],
    ["rank", "--method", "katz"],
    ["evaluate", "--method", "pr", "--tf", "0"],
    ["sweep", "--method", "ad"],
    ["rank", "--method", "pr", "--t", "1964-13"],
    ["figures", "--tf-list", "0"],
    ["figures", "--tf-list", "3,-6"],
    ["sweep", "--method", "ad", "--tau-grid", "0,12", "--alpha-grid", "0.5"],
    ["sweep", "--method", "cr", "--tau-grid", "12", "--alpha-grid", "0.5,1.0"],
])
def test_invalid_arguments_exit_2_without_output(config, tmp_path, argv):
    out = tmp_path / "out"
    assert run(argv + ["--config", config, "--out-dir", str(out)]) == 2
    assert not out.exists()


def test_missing_testing_time_is_usage_error(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(CONFIG.replace('  t: "1964-01"\n', ""), encoding="utf-8")
    assert run(["rank", "--config", str(path), "--method", "pr", "--out-dir", str(tmp_path / "out")]) == 2


def test_data_error_exit_1(config, tmp_path):
    argv = ["rank", "--config", config, "--dataset", "APS", "--metadata", str(tmp_path / "missing.csv"),
            "--edges", str(tmp_path / "missing_edges.csv"), "--method", "pr", "--out-dir", str(tmp_path / "out")]
    assert run(argv) == 1


def test_strict_non_convergence_exit_3(config, tmp_path):
    out = tmp_path / "out"
    base = ["rank", "--config", config, "--method", "cr", "--max-terms", "1", "--out-dir", str(out)]
    assert run(base + ["--strict"]) == 3
    assert not out.exists()
    assert run(base) == 0


def test_synth_then_ingest(config, tmp_path):
    corpus_dir = tmp_path / "corpus"
    assert run(["synth", "--config", config, "--out-dir", str(corpus_dir)]) == 0
    stats_path = tmp_path / "stats.json"
    argv = ["ingest", "--config", config, "--metadata", str(corpus_dir / "metadata.csv"),
            "--edges", str(corpus_dir / "edges.csv"), "--out", str(stats_path)]
    assert run(argv) == 0
    payload = json.loads(stats_path.read_text(encoding="utf-8"))
    assert payload["stats"]["kept_paper_count"] == 600
    assert payload["graph"]["n_edges"] == payload["stats"]["kept_edge_count"]
    assert payload["graph"]["first_month"] == "1960-01"


def test_output_dir_from_environment(config, tmp_path, monkeypatch):
    target = tmp_path / "env_out"
    monkeypatch.setenv("CITEPOP_OUTPUT_DIR", str(target))
    assert run(["synth", "--config", config, "--n-papers", "100"]) == 0
    assert (target / "metadata.csv").exists()


def test_sweep_writes_surface(config, tmp_path):
    out = tmp_path / "out"
    argv = ["sweep", "--config", config, "--method", "cr", "--tau-grid", "12,24", "--alpha-grid", "0.3:0.6:0.3",
            "--out-dir", str(out)]
    assert run(argv) == 0
    payload = json.loads(_only(out, "surface_SYNTH_cr_*.json").read_text(encoding="utf-8"))
    cells = payload["surface"]["cells"]
    assert [(c["tau"], c["alpha"]) for c in cells] == [(12.0, 0.3), (12.0, 0.6), (24.0, 0.3), (24.0, 0.6)]
    assert set(payload["surface"]["best"]) == {"precision", "spearman", "pearson"}
    table = pd.read_csv(_only(out, "surface_SYNTH_cr_*.csv"), skiprows=1)
    assert len(table) == 12


def test_figures_rerun_is_byte_identical(config, tmp_path):
    runs = []
    for name in ("a", "b"):
        out = tmp_path / name
        argv = ["figures", "--config", config, "--tf-list", "3,6", "--times", "1963-06,1964-01", "--out-dir", str(out)]
        assert run(argv) == 0
        runs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert runs[0] == runs[1]
    names = set(runs[0])
    assert any(n.startswith("fig2_metrics_vs_tf") for n in names)
    assert sum(n.startswith("fig3_scatter") for n in names) == 3
    for kind in ("fig4_delta_r", "fig5_age_cdf", "fig6_detection_rate", "figures_reports"):
        assert any(n.startswith(kind) for n in names)
