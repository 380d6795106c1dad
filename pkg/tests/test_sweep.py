import pytest

from core.errors import ParameterError
from evaluation.metrics import evaluate
from evaluation.popularity import future_popularity
from evaluation.sweep import draw_testing_times, multi_time_average, parameter_sweep, run_single, select_best
from network.months import month_of
from network.snapshot import snapshot
from pydantic_models.params_models import AgeDiffusionParams
from rankers import age_diffusion


@pytest.fixture(scope="module")
def setting(small_synth_graph):
    t = small_synth_graph.first_month + 40
    snap = snapshot(small_synth_graph, t)
    return small_synth_graph, snap, future_popularity(small_synth_graph, snap, 10)


def test_single_cell_equals_evaluate(setting):
    _, snap, fut = setting
    surface = parameter_sweep(snap, fut, "ad", [24.0], [0.74])
    direct = evaluate(age_diffusion(snap, AgeDiffusionParams(tau=24.0, alpha=0.74)), fut)
    assert len(surface.cells) == 1
    assert surface.cells[0].report.model_dump() == direct.model_dump()
    assert surface.best["precision"].tau == 24.0


def test_duplicate_grid_points_identical(setting):
    _, snap, fut = setting
    surface = parameter_sweep(snap, fut, "cr", [12.0, 12.0], [0.5], workers=2)
    a, b = surface.cells
    assert a.report.model_dump() == b.report.model_dump()


def test_grid_order_and_best(setting):
    _, snap, fut = setting
    surface = parameter_sweep(snap, fut, "ad", [6.0, 24.0], [0.2, 0.7], metrics=["spearman"])
    assert [(c.tau, c.alpha) for c in surface.cells] == [(6.0, 0.2), (6.0, 0.7), (24.0, 0.2), (24.0, 0.7)]
    best = surface.best["spearman"]
    assert best.report.spearman == max(c.report.spearman for c in surface.cells)
    assert select_best(surface.cells, "spearman") is best


def test_sweep_rejects_bad_input(setting):
    _, snap, fut = setting
    with pytest.raises(ParameterError):
        parameter_sweep(snap, fut, "pr", [24.0], [0.5])
    with pytest.raises(ParameterError):
        parameter_sweep(snap, fut, "ad", [], [0.5])
    with pytest.raises(ParameterError):
        parameter_sweep(snap, fut, "ad", [24.0], [0.5], metrics=["recall"])


def test_draw_testing_times():
    times = draw_testing_times(seed=5)
    assert times == draw_testing_times(seed=5)
    assert len(set(times)) == 5 and times == sorted(times)
    assert all(month_of(1990, 1) <= t <= month_of(2006, 1) for t in times)
    with pytest.raises(ParameterError):
        draw_testing_times(seed=1, count=4, start=10, end=12)


def test_multi_time_single_time_equals_single_run(setting):
    graph, snap, _ = setting
    params = AgeDiffusionParams()
    curve = multi_time_average(graph, [snap.t], [10], "ad", params)
    _, report = run_single(graph, snap.t, 10, "ad", params)
    assert curve.curves["precision"] == [report.precision]
    assert curve.curves["pearson"] == [report.pearson]
    assert curve.parameter_selection == "fixed"


def test_multi_time_averages_over_times(setting):
    graph, snap, _ = setting
    times = [snap.t - 4, snap.t]
    curve = multi_time_average(graph, times, [5, 10], "pr", workers=2)
    expected = sum(run_single(graph, t, 5, "pr")[1].spearman for t in times) / 2
    assert curve.curves["spearman"][0] == pytest.approx(expected, abs=1e-15)
    assert curve.T_f_list == [5, 10]


def test_multi_time_optimizes_per_metric(setting):
    graph, snap, _ = setting
    curve = multi_time_average(graph, [snap.t], [10], "cr", tau_grid=[6.0, 24.0], alpha_grid=[0.5])
    assert curve.parameter_selection == "per_metric_per_T_f"
    chosen = curve.chosen_params["precision"][0]
    surface = parameter_sweep(snap, future_popularity(graph, snap, 10), "cr", [6.0, 24.0], [0.5])
    assert chosen == {"tau": surface.best["precision"].tau, "alpha": 0.5}


def test_multi_time_rejects_window_beyond_corpus(setting):
    graph, _, _ = setting
    with pytest.raises(ParameterError):
        multi_time_average(graph, [graph.last_month - 2], [5], "ad")
