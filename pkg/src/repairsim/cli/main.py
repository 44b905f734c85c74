"""The ``repairsim`` command line.

Every command reads and writes one run directory::

    run/
      manifest.json       config, seeds, format versions, artifact digests
      index.jsonl         corpus index
      models/             statement.json (d=128), method.json (d=300)
      tasks.jsonl         extracted (and possibly sampled) repair tasks
      rejections.jsonl    hunks that failed the inclusion filters
      rankings/           per-metric ranking CSVs written by ``rank``
      report/             report.json plus CSV tables written by ``evaluate``
      cache/              score cache (REPAIRSIM_CACHE_DIR overrides)

Exit codes: 0 success, 1 usage or configuration error (including missing
prerequisites and refusing to overwrite), 2 data error.
"""

from __future__ import annotations

import json
import logging
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

import click

from .. import __version__
from ..corpus import CorpusError, CorpusIndex, LexError, build_index
from ..corpus.index import INDEX_VERSION, file_digest
from ..eval import DegenerateSample, build_report, write_report
from ..eval.report import REPORT_VERSION
from ..fixtures import FIXTURES
from ..metrics import EmbeddingError, EmbeddingModel, MetricContext, MetricKind, MissingModel, embed_train
from ..metrics.embedding import MODEL_VERSION
from ..ranking import CONTEXT, INGREDIENT, rank_combined, rank_contexts, rank_ingredients, write_rankings_csv
from ..tasks import DiffParseError, RepairTask, extract_tasks, parse_diff, read_jsonl, sample_tasks, write_jsonl
from .cache import CachingMetric, ScoreCache, fingerprint
from .config import ConfigError, RunConfig, build_config

log = logging.getLogger("repairsim")

MANIFEST_FORMAT = "repairsim-run"
MANIFEST_VERSION = 1
TASKS_VERSION = 1

INDEX_FILE = "index.jsonl"
STATEMENT_MODEL = "models/statement.json"
METHOD_MODEL = "models/method.json"
TASKS_FILE = "tasks.jsonl"
REJECTIONS_FILE = "rejections.jsonl"
REPORT_DIR = "report"


class Prerequisite(ConfigError):
    """An earlier pipeline step has not been run."""


class DataError(RuntimeError):
    """Input data could not be processed (exit code 2)."""


# ---------------------------------------------------------------------------
# run directory helpers


def _manifest_path(cfg: RunConfig) -> Path:
    return cfg.run_dir / "manifest.json"


def _update_manifest(cfg: RunConfig, step: str, record: dict) -> None:
    """Record one step's config and outputs; no timestamps, so reruns compare equal."""
    path = _manifest_path(cfg)
    manifest = {}
    if path.exists():
        try:
            manifest = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            manifest = {}
    manifest.update(
        {
            "format": MANIFEST_FORMAT,
            "version": MANIFEST_VERSION,
            "tool_version": __version__,
            "formats": {
                "index": INDEX_VERSION,
                "embedding": MODEL_VERSION,
                "tasks": TASKS_VERSION,
                "report": REPORT_VERSION,
            },
        }
    )
    manifest.setdefault("steps", {})[step] = record
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _require(cfg: RunConfig, rel: str, producer: str) -> Path:
    p = cfg.run_dir / rel
    if not p.exists():
        raise Prerequisite(f"missing {rel} in {cfg.run_dir}: run `repairsim {producer}` first")
    return p


def _load_index(cfg: RunConfig) -> CorpusIndex:
    return CorpusIndex.load(_require(cfg, INDEX_FILE, "index"))


def _load_tasks(cfg: RunConfig, index: CorpusIndex) -> list[RepairTask]:
    records = read_jsonl(_require(cfg, TASKS_FILE, "tasks"))
    try:
        return [RepairTask.from_record(r, index) for r in records]
    except KeyError as exc:
        raise DataError(f"task file does not match the index: unknown component {exc}") from None


def _models(cfg: RunConfig, needed: bool) -> tuple[Optional[EmbeddingModel], Optional[EmbeddingModel], str]:
    if not needed:
        return None, None, "none"
    st = _require(cfg, STATEMENT_MODEL, "train")
    me = _require(cfg, METHOD_MODEL, "train")
    digest = fingerprint(file_digest(st), file_digest(me))
    return EmbeddingModel.load(st), EmbeddingModel.load(me), digest


def _metrics(cfg: RunConfig, index: CorpusIndex, kinds: Sequence[MetricKind], use_cache: bool = True) -> dict:
    needs_model = MetricKind.DOC2VEC in kinds
    st, me, model_digest = _models(cfg, needs_model)
    context = MetricContext(index, st, me, deckard_pairs=cfg.deckard_pairs)
    index_digest = file_digest(cfg.run_dir / INDEX_FILE)
    cache = ScoreCache(cfg.effective_cache_dir) if use_cache else None
    out = {}
    for kind in kinds:
        metric = context.metric(kind)
        if cache is not None:
            settings = f"pairs={cfg.deckard_pairs}" if kind is MetricKind.DECKARD else ""
            model = model_digest if kind is MetricKind.DOC2VEC else "none"
            metric = CachingMetric(metric, cache, fingerprint(index_digest, model, settings))
        out[kind.value] = metric
    return out, cache


def _echo_json(data: dict) -> None:
    click.echo(json.dumps(data, sort_keys=True))


# ---------------------------------------------------------------------------
# commands

_common = [
    click.option("--config", "config_file", type=click.Path(path_type=Path), help="YAML run configuration."),
    click.option("--run", "run_dir", type=click.Path(path_type=Path), help="Run directory (default: run)."),
    click.option("--seed", type=int, help="Seed for training and sampling."),
    click.option("--jobs", type=int, help="Parallel workers."),
]


def common_options(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


def _config(config_file, **overrides) -> RunConfig:
    try:
        return build_config(config_file, **overrides)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


@click.group()
@click.version_option(__version__, prog_name="repairsim")
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose: bool) -> None:
    """Rank repair ingredients and donor contexts by code similarity."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(message)s")


@cli.command()
@common_options
@click.option("--corpus", "corpus_root", type=click.Path(path_type=Path), help="Application source root.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), help="Alias for --run.")
@click.option("--filter", "file_filter", multiple=True, help="File glob (repeatable), default **/*.java.")
@click.option("--force", is_flag=True, help="Overwrite an existing index.")
def index(config_file, run_dir, seed, jobs, corpus_root, out_dir, file_filter, force):
    """Segment a Java application into statements and methods."""
    cfg = _config(config_file, run_dir=out_dir or run_dir, seed=seed, jobs=jobs, corpus_root=corpus_root,
                  file_filter=file_filter or None)
    if cfg.corpus_root is None:
        raise ConfigError("no corpus root: pass --corpus or set corpus_root")
    if not cfg.corpus_root.is_dir():
        raise ConfigError(f"corpus root {cfg.corpus_root} is not a directory")
    target = cfg.run_dir / INDEX_FILE
    if target.exists() and not force:
        raise ConfigError(f"index exists: {target} (use --force to overwrite)")
    idx = build_index(cfg.corpus_root, cfg.file_filter, jobs=cfg.jobs)
    cfg.run_dir.mkdir(parents=True, exist_ok=True)
    idx.save(target)
    for d in idx.diagnostics:
        click.echo(f"warning: skipped {d.path}: {d.message}", err=True)
    summary = idx.summary()
    _update_manifest(cfg, "index", {"config": cfg.to_record(), "summary": summary, "index": file_digest(target)})
    _echo_json(summary)


@cli.command()
@common_options
@click.option("--force", is_flag=True, help="Overwrite existing models.")
def train(config_file, run_dir, seed, jobs, force):
    """Train the statement (d=128) and method (d=300) embedding models."""
    cfg = _config(config_file, run_dir=run_dir, seed=seed, jobs=jobs)
    idx = _load_index(cfg)
    st, me = cfg.run_dir / STATEMENT_MODEL, cfg.run_dir / METHOD_MODEL
    if (st.exists() or me.exists()) and not force:
        raise ConfigError(f"models exist in {st.parent} (use --force to overwrite)")
    emb = cfg.embedding
    st.parent.mkdir(parents=True, exist_ok=True)
    summary = {}
    for path, pool, dim, role in (
        (st, idx.statements, emb.statement_dimension, "statement"),
        (me, idx.methods, emb.method_dimension, "method"),
    ):
        log.info("training %s model (d=%d) on %d components", role, dim, len(pool))
        model = embed_train(pool, emb.config(dim, cfg.seed))
        model.save(path)
        summary[role] = {"dimension": dim, "vocabulary": len(model.words), "components": len(pool)}
    _update_manifest(
        cfg,
        "train",
        {
            "config": cfg.to_record(),
            "seeds": {"embedding": cfg.seed},
            "index": file_digest(cfg.run_dir / INDEX_FILE),
            "models": {"statement": file_digest(st), "method": file_digest(me)},
        },
    )
    _echo_json(summary)


@cli.command()
@common_options
@click.option("--diffs", "diff_dir", required=True, type=click.Path(path_type=Path), help="Directory of unified diffs.")
@click.option("--project", default=None, help="Project name recorded on each task (default: corpus directory name).")
@click.option("--limit", "sample_limit", type=int, help="Keep at most this many tasks per project.")
@click.option("--force", is_flag=True, help="Overwrite existing task files.")
def tasks(config_file, run_dir, seed, jobs, diff_dir, project, sample_limit, force):
    """Extract one-line replacement tasks from *.diff / *.patch files."""
    cfg = _config(config_file, run_dir=run_dir, seed=seed, jobs=jobs, sample_limit=sample_limit)
    if not diff_dir.is_dir():
        raise ConfigError(f"diff directory {diff_dir} does not exist")
    idx = _load_index(cfg)
    out, rej = cfg.run_dir / TASKS_FILE, cfg.run_dir / REJECTIONS_FILE
    if out.exists() and not force:
        raise ConfigError(f"tasks exist: {out} (use --force to overwrite)")
    if project is None:
        project = cfg.corpus_root.name if cfg.corpus_root else "app"
    found, rejected = [], []
    files = sorted(p for p in diff_dir.iterdir() if p.suffix in (".diff", ".patch") and p.is_file())
    for p in files:
        try:
            hunks = parse_diff(p.read_text(encoding="utf-8"))
        except DiffParseError as exc:
            raise DataError(f"{p.name}: {exc}") from None
        t, r = extract_tasks(hunks, idx, project, p.stem)
        found.extend(t)
        rejected.extend(r)
    selected = sample_tasks(found, cfg.sample_limit, cfg.effective_sample_seed) if cfg.sample_limit else found
    write_jsonl(out, (t.to_record() for t in selected))
    write_jsonl(rej, (r.to_record() for r in rejected))
    reasons: dict[str, int] = {}
    for r in rejected:
        reasons[r.reason] = reasons.get(r.reason, 0) + 1
    summary = {"diffs": len(files), "tasks": len(found), "selected": len(selected), "rejected": reasons}
    _update_manifest(
        cfg,
        "tasks",
        {
            "config": cfg.to_record(),
            "seeds": {"sample": cfg.effective_sample_seed},
            "summary": summary,
            "tasks": file_digest(out),
        },
    )
    _echo_json(summary)


@cli.command()
@common_options
@click.option("--metric", "metric_names", help="Metric, or a comma-separated list (default: config metrics).")
@click.option(
    "--level",
    type=click.Choice([INGREDIENT, CONTEXT, "combined"]),
    default=INGREDIENT,
    show_default=True,
)
@click.option("--task", "task_ids", multiple=True, help="Only these task ids (repeatable).")
@click.option("--top", type=int, default=None, help="Keep only the first N candidates per ranking.")
@click.option("--pessimistic", is_flag=True, default=None, help="Report the worst rank within score ties.")
def rank(config_file, run_dir, seed, jobs, metric_names, level, task_ids, top, pessimistic):
    """Rank candidates for tasks and write one CSV per metric."""
    cfg = _config(config_file, run_dir=run_dir, seed=seed, jobs=jobs, metrics=metric_names, pessimistic=pessimistic)
    idx = _load_index(cfg)
    all_tasks = _load_tasks(cfg, idx)
    if task_ids:
        known = {t.task_id for t in all_tasks}
        missing = [t for t in task_ids if t not in known]
        if missing:
            raise ConfigError(f"unknown task id(s): {', '.join(missing)}")
        all_tasks = [t for t in all_tasks if t.task_id in task_ids]
    kinds = cfg.metric_kinds()
    if level == "combined":
        if cfg.combined is None:
            raise ConfigError("no combined pair configured")
        kinds = [MetricKind(m) for m in dict.fromkeys(cfg.combined)]
    metrics, _ = _metrics(cfg, idx, kinds)
    out_dir = cfg.run_dir / "rankings"
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {}
    if level == "combined":
        ctx_m, ing_m = metrics[cfg.combined[0]], metrics[cfg.combined[1]]
        runs = {"": [rank_combined(t, ctx_m, ing_m, cfg.pessimistic) for t in all_tasks]}
    else:
        fn = rank_ingredients if level == INGREDIENT else rank_contexts
        runs = {name: [fn(t, m, cfg.pessimistic) for t in all_tasks] for name, m in metrics.items()}
    for _, rankings in runs.items():
        if not rankings:
            continue
        name = rankings[0].metric
        path = out_dir / f"{level}_{name.replace('>', '-')}.csv"
        write_rankings_csv(path, rankings, top)
        summary[name] = {r.task_id: r.correct_rank for r in rankings}
    _echo_json({"level": level, "correct_ranks": summary})


@cli.command()
@common_options
@click.option("--metrics", "metric_names", help="Comma-separated metrics, e.g. tfidf,lcs.")
@click.option("--combined", "combined_pair", help="Context,ingredient metric pair, or 'none'.")
@click.option("--bins", type=int, help="Histogram bins for density tables.")
@click.option("--pessimistic", is_flag=True, default=None, help="Report the worst rank within score ties.")
@click.option("--no-cache", is_flag=True, help="Score everything afresh and leave the cache untouched.")
def evaluate(config_file, run_dir, seed, jobs, metric_names, combined_pair, bins, pessimistic, no_cache):
    """Run every ranking protocol and write the report tables."""
    cfg = _config(
        config_file,
        run_dir=run_dir,
        seed=seed,
        jobs=jobs,
        metrics=metric_names,
        combined=combined_pair,
        bins=bins,
        pessimistic=pessimistic,
    )
    idx = _load_index(cfg)
    task_list = _load_tasks(cfg, idx)
    if not task_list:
        raise DataError("no tasks to evaluate")
    kinds = cfg.metric_kinds()
    extra = [MetricKind(m) for m in (cfg.combined or ()) if MetricKind(m) not in kinds]
    metrics, cache = _metrics(cfg, idx, kinds + extra, use_cache=not no_cache)
    subsets = {}
    for name, limit in sorted(cfg.metric_limits.items()):
        if name in metrics and limit < len(task_list):
            rng = random.Random(f"{cfg.effective_sample_seed}:{name}")
            subsets[name] = {t.task_id for t in rng.sample(task_list, limit)}
    base = {k.value: metrics[k.value] for k in kinds}
    combined = (metrics[cfg.combined[0]], metrics[cfg.combined[1]]) if cfg.combined else None
    report = build_report(
        task_list,
        base,
        combined=combined,
        subsets=subsets,
        bins=cfg.bins,
        pessimistic=cfg.pessimistic,
        jobs=cfg.jobs,
    )
    report.metadata["seed"] = cfg.seed
    written = write_report(report, cfg.run_dir / REPORT_DIR)
    if cache is not None:
        log.info("score cache: %d hits, %d misses", cache.hits, cache.misses)
        click.echo(f"score cache: {cache.hits} hits, {cache.misses} misses", err=True)
    _update_manifest(
        cfg,
        "evaluate",
        {
            "config": cfg.to_record(),
            "seeds": {"seed": cfg.seed, "sample": cfg.effective_sample_seed},
            "report": {p.name: file_digest(p) for p in written},
        },
    )
    for level, rows in report.stats.items():
        for s in rows:
            click.echo(
                f"{level:<10} {s.metric:<8} median={s.median_rank:<4} "
                f"reduction={s.space_reduction:.2%} perfect={s.perfect_repair_rate:.0%}"
            )


@cli.command()
@common_options
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def stats(config_file, run_dir, seed, jobs, fmt):
    """Print the statistics tables and Wilcoxon matrices of the last evaluation."""
    cfg = _config(config_file, run_dir=run_dir, seed=seed, jobs=jobs)
    path = _require(cfg, f"{REPORT_DIR}/report.json", "evaluate")
    try:
        report = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: {exc}") from None
    if fmt == "json":
        _echo_json({"stats": report["stats"], "wilcoxon": report["wilcoxon"]})
        return
    for level, rows in report["stats"].items():
        click.echo(f"[{level}]")
        click.echo(f"{'metric':<10}{'tasks':>6}{'median':>8}{'mean':>9}{'reduction':>11}{'perfect':>9}")
        for r in rows:
            click.echo(
                f"{r['metric']:<10}{r['tasks']:>6}{r['median_rank']:>8}{r['mean_rank']:>9.2f}"
                f"{r['space_reduction']:>11.2%}{r['perfect_repair_rate']:>9.0%}"
            )
        for e in report["wilcoxon"].get(level, []):
            if e["note"]:
                click.echo(f"  {e['a']} vs {e['b']}: {e['note']}")
            else:
                mark = "reject" if e["reject"] else "keep"
                click.echo(f"  {e['a']} vs {e['b']}: n={e['n']} T={e['T']:g} p={e['p']:.3g} ({e['method']}, {mark})")


@cli.command()
@click.argument("name", type=click.Choice(sorted(FIXTURES)))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
def fixture(name, out_dir):
    """Write a bundled synthetic application (app/ and diffs/) to OUT."""
    app, diffs = FIXTURES[name]().write(out_dir)
    _echo_json({"app": str(app), "diffs": str(diffs)})


# ---------------------------------------------------------------------------
# entry points

DATA_ERRORS = (DataError, CorpusError, LexError, DiffParseError, EmbeddingError, MissingModel, DegenerateSample)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="repairsim", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except DATA_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        click.echo(f"error: malformed input: {exc}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


def run() -> None:
    sys.exit(main())
