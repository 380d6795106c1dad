from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, Sequence

# Load environment variables from a .env file if present (before reading CITEPOP_OUTPUT_DIR)
try:
    from dotenv import load_dotenv
    load_dotenv()
except Exception:
    # If python-dotenv is not available or any error occurs, continue; environment variables may still be set externally
    pass

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from core.config_loader import load_config, section
from core.datasets import get_corpus_plugin
from core.errors import CitePopError, ConvergenceError, ParameterError
from core.log import banner, setup_logging
from core.utils import build_metadata, ensure_dir, result_filename, write_csv, write_json
from evaluation.figures import build_figure_bundle, curves_table, surface_table
from evaluation.popularity import future_popularity
from evaluation.sweep import METRICS, draw_testing_times, multi_time_average, parameter_sweep, run_single
from network.months import month_from_string, month_to_string
from network.snapshot import snapshot
from preprocessing.aps_preprocessing import load_corpus
from pydantic_models.params_models import SynthParams
from rankers import METHODS, build_params, rank_snapshot
from synthgen.generator import generate, write_corpus

logger = logging.getLogger("citepop")

SUBCOMMANDS = ("ingest", "synth", "rank", "evaluate", "sweep", "figures")
OUTPUT_DIR_ENV = "CITEPOP_OUTPUT_DIR"
PARAM_KEYS = ("c", "tau", "alpha", "delta_p", "tol", "max_iter", "max_terms", "step_decay_base")


class RunConfig(BaseModel):
    """Everything one command needs, validated before any computation or file write."""

    model_config = ConfigDict(extra="forbid")

    subcommand: str
    dataset: str = "APS"
    method: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    t: Optional[int] = None
    T_f: Optional[int] = Field(None, gt=0)
    fraction: float = Field(0.01, gt=0.0, le=1.0)
    bin_width: int = Field(60, ge=1)
    seed: Optional[int] = Field(None, ge=0)
    out_dir: Path = Path("results")
    out_file: Optional[Path] = None
    strict: bool = False
    workers: int = Field(1, ge=1)
    filter_uncited: bool = True
    tau_grid: Optional[List[Annotated[float, Field(gt=0.0)]]] = None
    alpha_grid: Optional[List[Annotated[float, Field(ge=0.0, lt=1.0)]]] = None
    metrics: List[str] = Field(default_factory=lambda: list(METRICS))
    tf_list: Optional[List[Annotated[int, Field(gt=0)]]] = None
    times: Optional[List[int]] = None
    n_times: int = Field(5, ge=1)
    time_range: Optional[List[int]] = None


# ---- argument parsing --------------------------------------------------------

def parse_grid(text: str) -> List[float]:
    """'6,12,24' or inclusive 'start:stop:step' (e.g. '6:120:6')."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(round((stop - start) / step)) + 1
            return [round(start + k * step, 10) for k in range(count)]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid grid '{text}'. Use 'a,b,c' or 'start:stop:step'.")


def parse_month(text: str) -> int:
    try:
        return month_from_string(text)
    except ParameterError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="Path to YAML config file")
    common.add_argument("--dataset", type=str, default=None, help="Corpus source: APS (CSV files) | SYNTH (generated)")
    common.add_argument("--metadata", type=str, default=None, help="Metadata CSV (external_id,pub_date)")
    common.add_argument("--edges", type=str, default=None, help="Citation CSV (citing_id,cited_id)")
    common.add_argument("--out-dir", type=str, default=None, help=f"Output directory (default: config, then ${OUTPUT_DIR_ENV}, then results/)")
    common.add_argument("--seed", type=int, default=None, help="Seed for synthetic generation and random testing times")
    common.add_argument("--workers", type=int, default=None, help="Concurrent ranking runs for sweeps")
    common.add_argument("--quiet", action="store_true", help="Only warnings and errors on stderr")

    ranked = argparse.ArgumentParser(add_help=False)
    ranked.add_argument("--t", type=parse_month, default=None, help="Testing time as YYYY-MM")
    ranked.add_argument("--no-filter", action="store_true", help="Keep papers without citations at t")
    ranked.add_argument("--strict", action="store_true", help="Exit 3 when a ranking does not converge")
    for key in ("c", "tau", "alpha", "tol", "step_decay_base"):
        ranked.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float, default=None)
    for key in ("delta_p", "max_iter", "max_terms"):
        ranked.add_argument(f"--{key.replace('_', '-')}", dest=key, type=int, default=None)

    scored = argparse.ArgumentParser(add_help=False)
    scored.add_argument("--tf", type=int, default=None, help="Future window T_f in months")
    scored.add_argument("--fraction", type=float, default=None, help="Top fraction for precision (default 0.01)")

    grids = argparse.ArgumentParser(add_help=False)
    grids.add_argument("--tau-grid", type=parse_grid, default=None)
    grids.add_argument("--alpha-grid", type=parse_grid, default=None)
    grids.add_argument("--metrics", type=str, default=None, help="Comma-separated subset of precision,spearman,pearson")

    parser = argparse.ArgumentParser(description="Citation popularity prediction runner")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", parents=[common], help="Parse and clean a corpus, emit statistics")
    p.add_argument("--out", type=str, default=None, help="Stats JSON file (default: standard output)")

    p = sub.add_parser("synth", parents=[common], help="Generate a synthetic corpus in the ingest format")
    p.add_argument("--n-papers", type=int, default=None)
    p.add_argument("--papers-per-month", type=int, default=None)
    p.add_argument("--refs", type=int, default=None, help="References per new paper (m)")
    p.add_argument("--theta", type=float, default=None, help="Relevance decay timescale in months")

    p = sub.add_parser("rank", parents=[common, ranked], help="Score every paper of the snapshot at t")
    p.add_argument("--method", type=str, required=True, choices=METHODS)

    p = sub.add_parser("evaluate", parents=[common, ranked, scored], help="Score and compare against the future window")
    p.add_argument("--method", type=str, required=True, choices=METHODS)

    p = sub.add_parser("sweep", parents=[common, ranked, scored, grids], help="(tau, alpha) surface for CiteRank or AD")
    p.add_argument("--method", type=str, default="ad", choices=("cr", "ad"))

    p = sub.add_parser("figures", parents=[common, ranked, scored, grids], help="All figure data exports in one pass")
    p.add_argument("--tf-list", type=str, default=None, help="Comma-separated T_f values for metric-vs-T_f curves")
    p.add_argument("--times", type=str, default=None, help="Comma-separated YYYY-MM testing times for the curves")
    p.add_argument("--n-times", type=int, default=None, help="Random testing times to draw when --times is absent")
    return parser


# ---- config resolution -------------------------------------------------------

def _first(*values):
    for v in values:
        if v is not None:
            return v
    return None


def resolve(args: argparse.Namespace, cfg: Dict) -> RunConfig:
    run_cfg, eval_cfg, sweep_cfg = section(cfg, 'run'), section(cfg, 'evaluation'), section(cfg, 'sweep')
    paths = cfg.setdefault('paths', {}) or {}
    cfg['paths'] = paths
    if args.metadata:
        paths['metadata_csv'] = args.metadata
    if args.edges:
        paths['edges_csv'] = args.edges

    seed = _first(args.seed, run_cfg.get('seed'))
    if seed is not None:
        cfg.setdefault('synth', {})
        cfg['synth'] = {**(cfg['synth'] or {}), 'seed': seed}

    method = getattr(args, 'method', None)
    params: Dict[str, Any] = {}
    if method:
        params.update(section(section(cfg, 'ranking'), method))
    params.update({k: getattr(args, k) for k in PARAM_KEYS if getattr(args, k, None) is not None})

    t_text = eval_cfg.get('t')
    times = getattr(args, 'times', None)
    tf_list = getattr(args, 'tf_list', None)
    metrics = getattr(args, 'metrics', None)
    values = dict(
        subcommand=args.subcommand,
        dataset=_first(args.dataset, run_cfg.get('dataset'), 'APS'),
        method=method,
        params=params,
        t=_first(getattr(args, 't', None), month_from_string(t_text) if t_text else None),
        T_f=_first(getattr(args, 'tf', None), eval_cfg.get('tf')),
        fraction=_first(getattr(args, 'fraction', None), eval_cfg.get('fraction'), 0.01),
        bin_width=_first(eval_cfg.get('bin_width'), 60),
        seed=seed,
        out_dir=Path(_first(args.out_dir, section(cfg, 'paths').get('results_dir'), os.getenv(OUTPUT_DIR_ENV), 'results')),
        out_file=Path(args.out) if getattr(args, 'out', None) else None,
        strict=bool(getattr(args, 'strict', False) or run_cfg.get('strict', False)),
        workers=_first(args.workers, run_cfg.get('workers'), 1),
        filter_uncited=not getattr(args, 'no_filter', False),
        tau_grid=_first(getattr(args, 'tau_grid', None), sweep_cfg.get('tau_grid')),
        alpha_grid=_first(getattr(args, 'alpha_grid', None), sweep_cfg.get('alpha_grid')),
        metrics=metrics.split(",") if metrics else list(sweep_cfg.get('metrics') or METRICS),
        tf_list=[int(x) for x in tf_list.split(",")] if tf_list else eval_cfg.get('tf_list'),
        times=[month_from_string(x) for x in times.split(",")] if times else None,
        n_times=_first(getattr(args, 'n_times', None), eval_cfg.get('n_times'), 5),
        time_range=[month_from_string(x) for x in eval_cfg['time_range']] if eval_cfg.get('time_range') else None,
    )
    try:
        rc = RunConfig(**values)
    except ValidationError as e:
        raise ParameterError(f"Invalid run configuration: {e}") from e

    if args.subcommand == 'synth':
        synth = dict(section(cfg, 'synth'))
        for flag, key in (('n_papers', 'n_papers'), ('papers_per_month', 'papers_per_month'), ('refs', 'refs_per_paper'), ('theta', 'theta')):
            if getattr(args, flag, None) is not None:
                synth[key] = getattr(args, flag)
        try:
            SynthParams(**synth)
        except ValidationError as e:
            raise ParameterError(f"Invalid synth parameters: {e}") from e
        cfg['synth'] = synth
    # reject out-of-range values up front
    for m in ([method] if method else (METHODS if args.subcommand == 'figures' else ())):
        base = {**section(section(cfg, 'ranking'), m), **params}
        build_params(m, base)
        for tau in rc.tau_grid or ():
            build_params(m, {**base, 'tau': tau})
        for alpha in rc.alpha_grid or ():
            build_params(m, {**base, 'alpha': alpha})
    if args.subcommand in ('rank', 'evaluate', 'sweep', 'figures') and rc.t is None:
        raise ParameterError("A testing time is required (--t YYYY-MM or evaluation.t in the config)")
    if args.subcommand in ('evaluate', 'sweep', 'figures') and rc.T_f is None:
        raise ParameterError("A future window is required (--tf MONTHS or evaluation.tf in the config)")
    if args.subcommand == 'sweep' and (not rc.tau_grid or not rc.alpha_grid):
        raise ParameterError("sweep needs --tau-grid and --alpha-grid (or sweep.tau_grid / sweep.alpha_grid)")
    return rc


def _metadata(rc: RunConfig, **extra) -> Dict[str, Any]:
    base = dict(command=rc.subcommand, dataset=rc.dataset.upper(), method=rc.method, params=None,
                t=month_to_string(rc.t) if rc.t is not None else None, T_f=rc.T_f, seed=rc.seed)
    base.update(extra)
    return build_metadata(**base)


def _require_converged(rc: RunConfig, ok: bool, what: str) -> None:
    if ok:
        return
    if rc.strict:
        raise ConvergenceError(f"{what} did not converge (--strict)")
    logger.warning(f"{what} did not converge; results are from the last iterate")


# ---- commands ----------------------------------------------------------------

def cmd_ingest(rc: RunConfig, cfg: Dict) -> None:
    paths = section(cfg, 'paths')
    if not paths.get('metadata_csv') or not paths.get('edges_csv'):
        raise ParameterError("ingest needs --metadata and --edges (or paths.metadata_csv / paths.edges_csv)")
    banner(logger, "INGEST START")
    graph, stats = load_corpus(paths['metadata_csv'], paths['edges_csv'])
    payload = {"metadata": _metadata(rc), "stats": stats.model_dump(),
               "graph": {"n_nodes": graph.n_nodes, "n_edges": graph.n_edges,
                         "first_month": month_to_string(graph.first_month), "last_month": month_to_string(graph.last_month)}}
    if rc.out_file:
        ensure_dir(rc.out_file.parent)
        write_json(rc.out_file, payload)
        logger.info(f"Saved corpus statistics to: {rc.out_file}")
    else:
        sys.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")


def cmd_synth(rc: RunConfig, cfg: Dict) -> None:
    params = SynthParams(**section(cfg, 'synth'))
    banner(logger, f"SYNTH START seed={params.seed}")
    corpus = generate(params)
    ensure_dir(rc.out_dir)
    meta = _metadata(rc, params=params.model_dump(), seed=params.seed)
    paths = write_corpus(corpus, rc.out_dir, meta)
    for kind, path in paths.items():
        logger.info(f"Saved synthetic {kind} to: {path}")


def _load(rc: RunConfig, cfg: Dict):
    plugin = get_corpus_plugin(rc.dataset)
    banner(logger, f"LOAD CORPUS [{plugin.name}]")
    graph, _ = plugin.load(cfg)
    return graph


def cmd_rank(rc: RunConfig, cfg: Dict) -> None:
    graph = _load(rc, cfg)
    snap = snapshot(graph, rc.t, rc.filter_uncited)
    params = build_params(rc.method, rc.params)
    banner(logger, f"RANK START [{rc.method}]")
    score = rank_snapshot(snap, rc.method, params)
    _require_converged(rc, score.converged, f"Ranking '{rc.method}'")

    ensure_dir(rc.out_dir)
    path = result_filename("scores", rc.dataset, rc.method, rc.out_dir, t=month_to_string(rc.t))
    write_csv(path, score.to_frame(), _metadata(rc, params=score.params))
    logger.info(f"Saved scores to: {path}")


def cmd_evaluate(rc: RunConfig, cfg: Dict) -> None:
    graph = _load(rc, cfg)
    banner(logger, f"EVALUATE START [{rc.method}]")
    _, report = run_single(graph, rc.t, rc.T_f, rc.method, build_params(rc.method, rc.params),
                           rc.fraction, rc.filter_uncited)
    _require_converged(rc, report.convergence_ok, f"Ranking '{rc.method}'")
    logger.info(f"pearson={report.pearson:.6f} spearman={report.spearman:.6f} precision={report.precision:.6f} (n_top={report.n_top})")

    ensure_dir(rc.out_dir)
    path = result_filename("report", rc.dataset, rc.method, rc.out_dir, suffix=".json", t=month_to_string(rc.t), tf=rc.T_f)
    write_json(path, {"metadata": _metadata(rc, params=report.params), "report": report.model_dump()})
    logger.info(f"Saved evaluation report to: {path}")


def cmd_sweep(rc: RunConfig, cfg: Dict) -> None:
    graph = _load(rc, cfg)
    snap = snapshot(graph, rc.t, rc.filter_uncited)
    future = future_popularity(graph, snap, rc.T_f)
    surface = parameter_sweep(snap, future, rc.method, rc.tau_grid, rc.alpha_grid, rc.metrics,
                              rc.fraction, rc.params, rc.workers)
    _require_converged(rc, all(c.report.convergence_ok for c in surface.cells), f"Sweep '{rc.method}'")
    for m, cell in surface.best.items():
        logger.info(f"best {m}: {cell.report.metric(m):.6f} at tau={cell.tau:g}, alpha={cell.alpha:g}")

    ensure_dir(rc.out_dir)
    meta = _metadata(rc, params=rc.params, tau_grid=rc.tau_grid, alpha_grid=rc.alpha_grid)
    tags = dict(t=month_to_string(rc.t), tf=rc.T_f)
    json_path = result_filename("surface", rc.dataset, rc.method, rc.out_dir, suffix=".json", **tags)
    csv_path = result_filename("surface", rc.dataset, rc.method, rc.out_dir, **tags)
    write_json(json_path, {"metadata": meta, "surface": surface.model_dump()})
    write_csv(csv_path, surface_table(surface), meta)
    logger.info(f"Saved sweep surface to: {json_path} and {csv_path}")


def cmd_figures(rc: RunConfig, cfg: Dict) -> None:
    graph = _load(rc, cfg)
    snap = snapshot(graph, rc.t, rc.filter_uncited)
    future = future_popularity(graph, snap, rc.T_f)
    ranking_cfg = section(cfg, 'ranking')
    params = {m: build_params(m, {**section(ranking_cfg, m), **rc.params}) for m in METHODS}

    surfaces = {}
    if rc.tau_grid and rc.alpha_grid:
        # CiteRank and AD use their best-precision cell
        for m in ("cr", "ad"):
            surfaces[m] = parameter_sweep(snap, future, m, rc.tau_grid, rc.alpha_grid, rc.metrics,
                                          rc.fraction, section(ranking_cfg, m), rc.workers)
            best = surfaces[m].best.get("precision") or next(iter(surfaces[m].best.values()))
            params[m] = build_params(m, {**section(ranking_cfg, m), "tau": best.tau, "alpha": best.alpha})

    bundle = build_figure_bundle(snap, future, params, rc.fraction, rc.bin_width)
    _require_converged(rc, all(r.convergence_ok for r in bundle.reports.values()), "Figure rankings")

    curves = []
    if rc.tf_list:
        window = rc.time_range or []
        times = rc.times or draw_testing_times(rc.seed if rc.seed is not None else 0, rc.n_times, *window[:2])
        for m in METHODS:
            optimize = m in ("cr", "ad") and bool(rc.tau_grid and rc.alpha_grid)
            curves.append(multi_time_average(
                graph, times, rc.tf_list, m, None if optimize else params[m], rc.metrics, rc.fraction,
                rc.tau_grid if optimize else None, rc.alpha_grid if optimize else None,
                section(ranking_cfg, m), rc.filter_uncited, rc.workers,
            ))

    # all computation done; write in a fixed order
    ensure_dir(rc.out_dir)
    tags = dict(t=month_to_string(rc.t), tf=rc.T_f)
    meta = _metadata(rc, method="all", params={m: p.model_dump() for m, p in params.items()})
    written = []
    for m, surface in surfaces.items():
        path = result_filename("fig1_surface", rc.dataset, m, rc.out_dir, **tags)
        write_csv(path, surface_table(surface), meta)
        written.append(path)
    if curves:
        path = result_filename("fig2_metrics_vs_tf", rc.dataset, "all", rc.out_dir, t=None)
        write_csv(path, curves_table(curves),
                  _metadata(rc, method="all", times=[month_to_string(t) for t in curves[0].times],
                            parameter_selection={c.method_tag: c.parameter_selection for c in curves},
                            chosen_params={c.method_tag: c.chosen_params for c in curves}))
        written.append(path)
    for name in sorted(k for k in bundle.tables if k.startswith("scatter_")):
        path = result_filename("fig3_scatter", rc.dataset, "ad-vs-" + name.split("_", 1)[1], rc.out_dir, **tags)
        write_csv(path, bundle.tables[name], meta)
        written.append(path)
    for kind, name in (("fig4_delta_r", "delta_r_by_age"), ("fig5_age_cdf", "age_cdf"), ("fig6_detection_rate", "detection_rate_by_age")):
        path = result_filename(kind, rc.dataset, "all", rc.out_dir, **tags)
        write_csv(path, bundle.tables[name], meta)
        written.append(path)
    path = result_filename("figures_reports", rc.dataset, "all", rc.out_dir, suffix=".json", **tags)
    write_json(path, {
        "metadata": meta,
        "reports": {m: r.model_dump() for m, r in bundle.reports.items()},
        "age_bins": {m: s.model_dump() for m, s in bundle.age_stats.items()},
    })
    written.append(path)
    for p in written:
        logger.info(f"Saved: {p}")


_COMMANDS = {
    "ingest": cmd_ingest,
    "synth": cmd_synth,
    "rank": cmd_rank,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "figures": cmd_figures,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse `argv`, run one subcommand, and return the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        cfg = load_config(args.config, allow_missing=True)
        setup_logging(verbose=bool(section(cfg, 'run').get('verbose', True)) and not args.quiet)
        rc = resolve(args, cfg)
        _COMMANDS[rc.subcommand](rc, cfg)
    except CitePopError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (FileNotFoundError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
