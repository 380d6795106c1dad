import numpy as np
import pytest

from core.errors import EvaluationError, ParameterError
from evaluation.metrics import average_ranks, evaluate, pearson, precision_at_top, spearman, top_count
from evaluation.popularity import future_popularity
from network.snapshot import snapshot
from rankers import citerank
from rankers.score import ScoreVector
from tests.conftest import make_graph


def test_pearson_examples():
    f = np.array([2.0, 1.0, 4.0])
    assert pearson(f, f).value == pytest.approx(1.0)
    assert pearson(-f + 3.0, f).value == pytest.approx(-1.0)
    assert pearson(np.array([1.0, 2.0, 3.0]), f).value == pytest.approx(0.6546537, abs=1e-6)


def test_pearson_degenerate_and_errors():
    r = pearson(np.array([1.0, 1.0, 1.0]), np.array([1.0, 2.0, 3.0]))
    assert r == (0.0, True)
    with pytest.raises(EvaluationError):
        pearson(np.array([1.0, 2.0]), np.array([1.0, 2.0, 3.0]))
    with pytest.raises(EvaluationError):
        pearson(np.array([1.0]), np.array([1.0]))


def test_spearman_examples():
    s = np.array([10.0, 20.0, 20.0, 30.0])
    f = np.array([1.0, 2.0, 3.0, 4.0])
    assert average_ranks(s).tolist() == [1.0, 2.5, 2.5, 4.0]
    assert spearman(s, f).value == pytest.approx(0.9486833, abs=1e-6)
    assert spearman(f ** 3, f).value == pytest.approx(1.0)
    assert spearman(f, np.ones(4)).degenerate


def test_invariances():
    rng = np.random.default_rng(3)
    s = rng.random(300)
    f = rng.poisson(3.0, 300).astype(float)
    assert pearson(3.0 * s + 7.0, f).value == pytest.approx(pearson(s, f).value, abs=1e-12)
    assert spearman(s ** 3, f).value == pytest.approx(spearman(s, f).value, abs=1e-12)
    assert precision_at_top(np.exp(s), f) == precision_at_top(s, f)


def test_precision_example():
    n = 200
    s = np.zeros(n)
    f = np.zeros(n)
    s[0], s[1] = 10.0, 9.0  # predicted top: A, B
    f[1], f[2] = 9.0, 10.0  # real top: B, C
    assert precision_at_top(s, f, 0.01) == (0.5, 2)


def test_precision_extremes():
    f = np.arange(100, dtype=float)
    assert precision_at_top(f, f, 0.1)[0] == 1.0
    assert precision_at_top(-f, f, 0.1)[0] == 0.0


def test_precision_ties_resolved_by_id():
    ids = np.array(["a", "b", "c", "d"])
    s = ScoreVector(np.array([1.0, 1.0, 1.0, 1.0]), ids, "x")
    f = ScoreVector(np.array([0.0, 0.0, 0.0, 5.0]), ids, "y")
    # constant scores select "a"; real top is "d"
    assert precision_at_top(s, f, n_top=1)[0] == 0.0


def test_top_count():
    assert top_count(200, 0.01) == 2
    with pytest.raises(EvaluationError, match="raise the fraction"):
        top_count(50, 0.01)
    with pytest.raises(EvaluationError):
        top_count(50, 0.0)


def _window_graph():
    # P (month 0) cited by Q (month 1) before t=10, then by X1 (t+1), X2 (t+T_f), X3 (t+T_f+1)
    return make_graph(
        {"P": 0, "Q": 1, "X1": 11, "X2": 15, "X3": 16},
        [("Q", "P"), ("X1", "P"), ("X2", "P"), ("X3", "P")],
    )


def test_future_popularity_half_open_window():
    g = _window_graph()
    snap = snapshot(g, 10)
    fut = future_popularity(g, snap, 5)
    assert snap.ids.tolist() == ["P"]
    assert fut.values.tolist() == [2]
    assert fut.t == 10 and fut.T_f == 5


def test_future_popularity_errors():
    g = _window_graph()
    snap = snapshot(g, 10)
    with pytest.raises(ParameterError):
        future_popularity(g, snap, 0)
    with pytest.raises(ParameterError):
        future_popularity(g, snap, 7)


def test_future_popularity_recount(small_synth_graph):
    g = small_synth_graph
    t = g.first_month + 40
    snap = snapshot(g, t)
    fut = future_popularity(g, snap, 10)
    in_snap = set(snap.ids.tolist())
    month = dict(zip(g.ids.tolist(), g.pub_month.tolist()))
    expected = sum(1 for a, b in g.edge_list() if b in in_snap and t < month[a] <= t + 10)
    assert int(fut.values.sum()) == expected
    assert (fut.values >= 0).all()


def test_evaluate_report(small_synth_graph):
    g = small_synth_graph
    snap = snapshot(g, g.first_month + 40)
    fut = future_popularity(g, snap, 10)
    score = citerank(snap)
    report = evaluate(score, fut)
    assert report.method_tag == "cr"
    assert report.n_papers == snap.n_nodes
    assert report.n_top == top_count(snap.n_nodes, 0.01)
    assert report.precision == precision_at_top(score, fut)[0]
    assert report.spearman == spearman(score, fut).value
    assert report.params["tau"] == 24.0
