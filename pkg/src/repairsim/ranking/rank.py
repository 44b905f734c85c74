"""Context-less, context-aware and combined rankings for one repair task."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from ..corpus import SourceComponent
from ..metrics import Metric
from ..tasks import RepairTask

INGREDIENT = "ingredient"
CONTEXT = "context"
COMBINED = "combined"

EQUIVALENT_TO_MODIFICATION_POINT = "equivalent-to-modification-point"
EQUIVALENT_TO_RECIPIENT = "equivalent-to-recipient-context"


@dataclass(frozen=True)
class Ranking:
    """Ordered candidates for one task under one metric.

    ``correct_rank`` is 1-based, or None when no candidate matches the
    target. Ties in score are ordered by corpus position; ``worst_rank`` is
    the last position of the target's tie group (pessimistic reading).
    """

    task_id: str
    metric: str
    level: str
    candidates: tuple[tuple[str, float], ...]
    excluded: tuple[tuple[str, str], ...]
    correct_rank: Optional[int]
    worst_rank: Optional[int] = None

    @property
    def pool_size(self) -> int:
        return len(self.candidates)

    @property
    def normalized_rank(self) -> Optional[float]:
        if self.correct_rank is None:
            return None
        return self.correct_rank / self.pool_size

    @property
    def ids(self) -> list[str]:
        return [cid for cid, _ in self.candidates]


def combined_name(context_metric: str, ingredient_metric: str) -> str:
    if context_metric == ingredient_metric:
        return f"{context_metric}2"
    return f"{context_metric}>{ingredient_metric}"


def _sorted(cands: Sequence[SourceComponent], scores: np.ndarray) -> list[int]:
    return sorted(range(len(cands)), key=lambda i: (-scores[i], cands[i].position))


def _target_ranks(
    ordered: Sequence[SourceComponent],
    scores: Sequence[float],
    is_target: Callable[[SourceComponent], bool],
) -> tuple[Optional[int], Optional[int]]:
    for pos, c in enumerate(ordered):
        if is_target(c):
            worst = pos
            while worst + 1 < len(ordered) and scores[worst + 1] == scores[pos]:
                worst += 1
            return pos + 1, worst + 1
    return None, None


def _finish(
    task: RepairTask,
    name: str,
    level: str,
    ordered: list[SourceComponent],
    scores: list[float],
    excluded: list[tuple[str, str]],
    is_target: Callable[[SourceComponent], bool],
    pessimistic: bool,
    target_ranks: Optional[tuple[Optional[int], Optional[int]]] = None,
) -> Ranking:
    best, worst = target_ranks or _target_ranks(ordered, scores, is_target)
    return Ranking(
        task_id=task.task_id,
        metric=name,
        level=level,
        candidates=tuple((c.id, float(s)) for c, s in zip(ordered, scores)),
        excluded=tuple(excluded),
        correct_rank=worst if pessimistic else best,
        worst_rank=worst,
    )


def rank_ingredients(task: RepairTask, metric: Metric, pessimistic: bool = False) -> Ranking:
    """Rank every pooled statement against the modification point.

    Statements syntactically equivalent to the modification point are
    excluded. The correct rank is that of the first candidate equivalent to
    the ground-truth ingredient.
    """
    mp = task.modification_point
    excluded = [(s.id, EQUIVALENT_TO_MODIFICATION_POINT) for s in task.corpus.statements if s.key == mp.key]
    cands = [s for s in task.corpus.statements if s.key != mp.key]
    scores = metric.score_many(mp, cands)
    order = _sorted(cands, scores)
    target = task.correct_ingredient.key
    return _finish(
        task,
        metric.name,
        INGREDIENT,
        [cands[i] for i in order],
        [float(scores[i]) for i in order],
        excluded,
        lambda c: c.key == target,
        pessimistic,
    )


def donor_contexts_with_target(task: RepairTask) -> set[str]:
    """Ids of methods that contain a statement equivalent to the correct ingredient."""
    corpus = task.corpus
    hits: set[str] = set()
    for s in corpus.equivalents(task.correct_ingredient):
        for m in corpus.methods:
            if m.contains(s):
                hits.add(m.id)
    return hits


def rank_contexts(task: RepairTask, metric: Metric, pessimistic: bool = False) -> Ranking:
    """Rank every pooled method against the recipient context.

    Methods syntactically equivalent to the recipient are excluded. The
    correct rank is that of the first donor containing the correct ingredient.
    """
    rc = task.recipient_context
    excluded = [(m.id, EQUIVALENT_TO_RECIPIENT) for m in task.corpus.methods if m.key == rc.key]
    cands = [m for m in task.corpus.methods if m.key != rc.key]
    scores = metric.score_many(rc, cands)
    order = _sorted(cands, scores)
    targets = donor_contexts_with_target(task)
    return _finish(
        task,
        metric.name,
        CONTEXT,
        [cands[i] for i in order],
        [float(scores[i]) for i in order],
        excluded,
        lambda c: c.id in targets,
        pessimistic,
    )


def rank_combined(
    task: RepairTask,
    context_metric: Metric,
    ingredient_metric: Metric,
    pessimistic: bool = False,
) -> Ranking:
    """Two-level ranking: donors by ``context_metric``, then statements inside each.

    All statements of the best donor come first (ordered by
    ``ingredient_metric``), then those of the second donor, and so on. A
    statement belongs to its innermost enclosing method. Candidate scores are
    the ingredient-level scores, so they only decrease within a donor.
    """
    corpus = task.corpus
    mp = task.modification_point
    contexts = rank_contexts(task, context_metric)
    excluded = list(contexts.excluded)
    groups: list[list[SourceComponent]] = []
    for donor_id in contexts.ids:
        group = []
        for s in corpus.statements_of(corpus[donor_id]):
            if s.key == mp.key:
                excluded.append((s.id, EQUIVALENT_TO_MODIFICATION_POINT))
            else:
                group.append(s)
        groups.append(group)
    flat = [s for g in groups for s in g]
    scores = ingredient_metric.score_many(mp, flat) if flat else np.empty(0)
    ordered: list[SourceComponent] = []
    ordered_scores: list[float] = []
    offset = 0
    for g in groups:
        local = scores[offset : offset + len(g)]
        offset += len(g)
        for i in _sorted(g, local):
            ordered.append(g[i])
            ordered_scores.append(float(local[i]))
    target = task.correct_ingredient.key
    # tie groups never span donors
    best = worst = None
    start = 0
    for g in groups:
        part = ordered[start : start + len(g)]
        b, w = _target_ranks(part, ordered_scores[start : start + len(g)], lambda c: c.key == target)
        if b is not None:
            best, worst = b + start, w + start
            break
        start += len(g)
    name = combined_name(context_metric.name, ingredient_metric.name)
    return _finish(task, name, COMBINED, ordered, ordered_scores, excluded, lambda c: False, pessimistic, (best, worst))


# ---------------------------------------------------------------------------
# export

RANKING_FIELDS = ("task_id", "metric", "level", "rank", "component_id", "score", "normalized_rank")


def ranking_rows(rankings: Iterable[Ranking], top: Optional[int] = None) -> list[dict]:
    rows = []
    for r in rankings:
        n = r.pool_size
        for pos, (cid, score) in enumerate(r.candidates[:top] if top else r.candidates, 1):
            rows.append(
                {
                    "task_id": r.task_id,
                    "metric": r.metric,
                    "level": r.level,
                    "rank": pos,
                    "component_id": cid,
                    "score": repr(score),
                    "normalized_rank": repr(pos / n),
                }
            )
    return rows


def write_rankings_csv(path, rankings: Iterable[Ranking], top: Optional[int] = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=RANKING_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(ranking_rows(rankings, top))
