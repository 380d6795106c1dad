from evaluation.age_bias import cumulative_age_distribution, delta_r, detection_rate_by_age, ranking_scatter
from evaluation.metrics import Correlation, evaluate, pearson, precision_at_top, spearman
from evaluation.popularity import FuturePopularity, future_popularity
from evaluation.sweep import draw_testing_times, multi_time_average, parameter_sweep, select_best

__all__ = [
    "Correlation",
    "FuturePopularity",
    "cumulative_age_distribution",
    "delta_r",
    "detection_rate_by_age",
    "draw_testing_times",
    "evaluate",
    "future_popularity",
    "multi_time_average",
    "parameter_sweep",
    "pearson",
    "precision_at_top",
    "ranking_scatter",
    "select_best",
    "spearman",
]
