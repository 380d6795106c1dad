from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, Mapping, Type

from pydantic import BaseModel, ValidationError

from core.errors import ParameterError
from network.snapshot import GraphSnapshot
from pydantic_models.params_models import AgeDiffusionParams, CiteRankParams, PageRankParams, RescaleParams
from rankers.age_diffusion import age_diffusion
from rankers.citerank import citerank, seed_vector
from rankers.pagerank import pagerank
from rankers.rescaled_pagerank import rescaled_pagerank
from rankers.score import ScoreVector, ranking_order, ranking_positions


def _rank_rescaled(snap: GraphSnapshot, params: RescaleParams) -> ScoreVector:
    return rescaled_pagerank(snap, pagerank(snap, params.pagerank), params)


@dataclass(frozen=True)
class RankerPlugin:
    name: str
    label: str
    params_model: Type[BaseModel]
    rank: Callable[[GraphSnapshot, Any], ScoreVector]
    # flat config/flag keys accepted by params_model (nested ones are routed by build_params)
    keys: tuple


_REGISTRY: Dict[str, RankerPlugin] = {
    'pr': RankerPlugin('pr', 'PageRank', PageRankParams, pagerank, ('c', 'tol', 'max_iter')),
    'cr': RankerPlugin('cr', 'CiteRank', CiteRankParams, citerank, ('tau', 'alpha', 'tol', 'max_terms')),
    'rs': RankerPlugin('rs', 'rescaled PageRank', RescaleParams, _rank_rescaled, ('delta_p',)),
    'ad': RankerPlugin('ad', 'age-based diffusion', AgeDiffusionParams, age_diffusion,
                       ('tau', 'alpha', 'step_decay_base', 'tol', 'max_terms')),
}

METHODS = tuple(_REGISTRY.keys())


def get_ranker(method: str) -> RankerPlugin:
    key = (method or '').strip().lower()
    if key not in _REGISTRY:
        raise KeyError(f"Unknown ranking method '{method}'. Available: {', '.join(_REGISTRY.keys())}")
    return _REGISTRY[key]


def build_params(method: str, values: Mapping[str, Any] | None = None) -> BaseModel:
    """
    Validate flat parameter values for `method`. Keys the method does not use are ignored;
    for 'rs' the PageRank keys (c, tol, max_iter) are routed to the nested PageRank params.
    """
    plugin = get_ranker(method)
    values = {k: v for k, v in (values or {}).items() if v is not None}
    try:
        if plugin.name == 'rs':
            pr_values = {k: values[k] for k in _REGISTRY['pr'].keys if k in values}
            own = {k: values[k] for k in plugin.keys if k in values}
            return RescaleParams(**own, pagerank=PageRankParams(**pr_values))
        return plugin.params_model(**{k: values[k] for k in plugin.keys if k in values})
    except ValidationError as e:
        raise ParameterError(f"Invalid parameters for method '{plugin.name}': {e}") from e


def rank_snapshot(snap: GraphSnapshot, method: str, params: BaseModel | None = None) -> ScoreVector:
    plugin = get_ranker(method)
    if params is None:
        params = build_params(plugin.name)
    if not isinstance(params, plugin.params_model):
        raise ParameterError(f"Method '{plugin.name}' expects {plugin.params_model.__name__}, got {type(params).__name__}")
    return plugin.rank(snap, params)


__all__ = [
    "METHODS",
    "RankerPlugin",
    "ScoreVector",
    "age_diffusion",
    "build_params",
    "citerank",
    "get_ranker",
    "pagerank",
    "rank_snapshot",
    "ranking_order",
    "ranking_positions",
    "rescaled_pagerank",
    "seed_vector",
]
