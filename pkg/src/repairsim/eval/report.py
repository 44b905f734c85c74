"""Runs every ranking protocol over a task set and aggregates the results."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Callable, Collection, Mapping, Optional, Sequence

from ..metrics import Metric
from ..ranking import CONTEXT, INGREDIENT, Ranking, combined_name, rank_combined, rank_contexts, rank_ingredients
from ..tasks import RepairTask
from .stats import DensityTable, RankStats, distribution_export, rank_stats
from .wilcoxon import ALPHA, MIN_PAIRS, DegenerateSample, WilcoxonResult, wilcoxon_signed_rank

REPORT_FORMAT = "repairsim-report"
REPORT_VERSION = 1


@dataclass(frozen=True)
class WilcoxonEntry:
    level: str
    a: str
    b: str
    pairs: int
    result: Optional[WilcoxonResult]
    note: str = ""

    def to_row(self) -> dict:
        row = {"level": self.level, "a": self.a, "b": self.b, "pairs": self.pairs, "note": self.note}
        if self.result is not None:
            row.update(self.result.to_dict())
        else:
            row.update({"n": "", "T": "", "p": "", "method": "", "reject": ""})
        return row


@dataclass
class EvalReport:
    tasks: list[str]
    rankings: dict[str, dict[str, list[Ranking]]]  # level -> metric -> rankings
    stats: dict[str, list[RankStats]]
    wilcoxon: dict[str, list[WilcoxonEntry]]
    absent: list[tuple[str, str, str]]
    densities: dict[str, dict[str, DensityTable]]
    metadata: dict = field(default_factory=dict)

    def stats_for(self, level: str, metric: str) -> RankStats:
        for s in self.stats[level]:
            if s.metric == metric:
                return s
        raise KeyError((level, metric))

    def wilcoxon_matrix(self, level: str) -> dict[tuple[str, str], WilcoxonEntry]:
        """Symmetric lookup; the diagonal is absent."""
        out = {}
        for e in self.wilcoxon[level]:
            out[(e.a, e.b)] = e
            out[(e.b, e.a)] = e
        return out

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "version": REPORT_VERSION,
            "metadata": self.metadata,
            "tasks": self.tasks,
            "absent": [list(a) for a in self.absent],
            "stats": {lvl: [s.to_row() for s in rows] for lvl, rows in self.stats.items()},
            "wilcoxon": {lvl: [e.to_row() for e in rows] for lvl, rows in self.wilcoxon.items()},
            "correct_ranks": {
                lvl: {
                    m: [[r.task_id, r.correct_rank, r.pool_size] for r in rs]
                    for m, rs in by_metric.items()
                }
                for lvl, by_metric in self.rankings.items()
            },
            "normalized_ranks": {
                lvl: {m: [r.normalized_rank for r in rs if r.correct_rank is not None] for m, rs in by_metric.items()}
                for lvl, by_metric in self.rankings.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"


def _run(tasks: Sequence[RepairTask], fn: Callable[[RepairTask], Ranking], jobs: int) -> list[Ranking]:
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def _pairwise(level: str, by_metric: Mapping[str, list[Ranking]], alpha: float) -> list[WilcoxonEntry]:
    entries = []
    for a, b in combinations(by_metric, 2):
        ra = {r.task_id: r.correct_rank for r in by_metric[a] if r.correct_rank is not None}
        rb = {r.task_id: r.correct_rank for r in by_metric[b] if r.correct_rank is not None}
        common = [t for t in ra if t in rb]
        x = [ra[t] for t in common]
        y = [rb[t] for t in common]
        if len(common) < MIN_PAIRS:
            entries.append(WilcoxonEntry(level, a, b, len(common), None, f"insufficient sample (< {MIN_PAIRS} pairs)"))
            continue
        try:
            result = wilcoxon_signed_rank(x, y, alpha=alpha)
        except DegenerateSample:
            entries.append(WilcoxonEntry(level, a, b, len(common), None, "degenerate sample"))
            continue
        entries.append(WilcoxonEntry(level, a, b, len(common), result))
    return entries


def build_report(
    tasks: Sequence[RepairTask],
    metrics: Mapping[str, Metric],
    combined: Optional[tuple[Metric, Metric]] = None,
    subsets: Optional[Mapping[str, Collection[str]]] = None,
    bins: int = 20,
    pessimistic: bool = False,
    jobs: int = 1,
    alpha: float = ALPHA,
) -> EvalReport:
    """Rank every task under every metric at both levels and aggregate.

    ``subsets`` restricts a metric to some task ids (e.g. an expensive
    metric run on a sample); Wilcoxon pairs then use the tasks both metrics
    ranked. Rankings without a correct rank are dropped from the statistics
    and listed in ``absent``.
    """
    subsets = subsets or {}
    rankings: dict[str, dict[str, list[Ranking]]] = {INGREDIENT: {}, CONTEXT: {}}
    for name, metric in metrics.items():
        mine = [t for t in tasks if name not in subsets or t.task_id in subsets[name]]
        rankings[INGREDIENT][name] = _run(mine, lambda t: rank_ingredients(t, metric, pessimistic), jobs)
        rankings[CONTEXT][name] = _run(mine, lambda t: rank_contexts(t, metric, pessimistic), jobs)
    if combined is not None:
        ctx_m, ing_m = combined
        name = combined_name(ctx_m.name, ing_m.name)
        rankings[INGREDIENT][name] = _run(tasks, lambda t: rank_combined(t, ctx_m, ing_m, pessimistic), jobs)

    absent: list[tuple[str, str, str]] = []
    stats: dict[str, list[RankStats]] = {}
    densities: dict[str, dict[str, DensityTable]] = {}
    for level, by_metric in rankings.items():
        stats[level] = []
        densities[level] = {}
        for name, rs in by_metric.items():
            absent.extend((r.task_id, name, level) for r in rs if r.correct_rank is None)
            present = [r for r in rs if r.correct_rank is not None]
            if present:
                stats[level].append(rank_stats(present, name, level))
                densities[level][name] = distribution_export(present, bins)
    wilcoxon = {
        INGREDIENT: _pairwise(INGREDIENT, {m: rankings[INGREDIENT][m] for m in metrics}, alpha),
        CONTEXT: _pairwise(CONTEXT, rankings[CONTEXT], alpha),
    }
    metadata = {
        "alpha": alpha,
        "median": "lower",
        "space_reduction": "1 - mean(correct rank) / mean(pool size)",
        "ties": "pessimistic" if pessimistic else "corpus-position",
        "wilcoxon_zero_differences": "dropped",
        "wilcoxon_exact_max_n": 12,
        "bins": bins,
        "subsets": {k: sorted(v) for k, v in sorted(subsets.items())},
    }
    return EvalReport(
        tasks=[t.task_id for t in tasks],
        rankings=rankings,
        stats=stats,
        wilcoxon=wilcoxon,
        absent=absent,
        densities=densities,
        metadata=metadata,
    )


def _write_csv(path: Path, rows: list[dict], fields: Sequence[str]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


STATS_FIELDS = (
    "metric", "level", "tasks", "median_rank", "mean_rank", "mean_pool_size",
    "space_reduction", "space_reduction_per_task", "perfect_repair_rate",
)
WILCOXON_FIELDS = ("level", "a", "b", "pairs", "n", "T", "p", "method", "reject", "note")


def write_report(report: EvalReport, out_dir: str | Path) -> list[Path]:
    """Write report.json plus one CSV per table and per density plot."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "report.json"]
    written[0].write_text(report.to_json(), encoding="utf-8")
    for level in report.stats:
        p = out / f"stats_{level}.csv"
        _write_csv(p, [s.to_row() for s in report.stats[level]], STATS_FIELDS)
        written.append(p)
    for level in report.wilcoxon:
        p = out / f"wilcoxon_{level}.csv"
        _write_csv(p, [e.to_row() for e in report.wilcoxon[level]], WILCOXON_FIELDS)
        written.append(p)
    for level, tables in report.densities.items():
        rows = []
        for metric, table in tables.items():
            rows.extend({"metric": metric, **r} for r in table.rows())
        p = out / f"density_{level}.csv"
        _write_csv(p, rows, ("metric", "bin", "lower", "upper", "count", "density"))
        written.append(p)
    rows = []
    for level, by_metric in report.rankings.items():
        for metric, rs in by_metric.items():
            for r in rs:
                rows.append(
                    {
                        "task_id": r.task_id,
                        "metric": metric,
                        "level": level,
                        "correct_rank": "" if r.correct_rank is None else r.correct_rank,
                        "pool_size": r.pool_size,
                        "normalized_rank": "" if r.correct_rank is None else repr(r.normalized_rank),
                    }
                )
    p = out / "correct_ranks.csv"
    _write_csv(p, rows, ("task_id", "metric", "level", "correct_rank", "pool_size", "normalized_rank"))
    written.append(p)
    return written
