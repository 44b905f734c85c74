"""Rank statistics and normalized-rank distributions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..ranking import Ranking


@dataclass(frozen=True)
class RankStats:
    metric: str
    level: str
    tasks: int
    median_rank: int
    mean_rank: float
    mean_pool_size: float
    space_reduction: float
    space_reduction_per_task: float
    perfect_repair_rate: float
    normalized_ranks: tuple[float, ...]

    def to_row(self) -> dict:
        return {
            "metric": self.metric,
            "level": self.level,
            "tasks": self.tasks,
            "median_rank": self.median_rank,
            "mean_rank": self.mean_rank,
            "mean_pool_size": self.mean_pool_size,
            "space_reduction": self.space_reduction,
            "space_reduction_per_task": self.space_reduction_per_task,
            "perfect_repair_rate": self.perfect_repair_rate,
        }


def lower_median(values: Sequence[int]) -> int:
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def _present(rankings: Sequence[Ranking]) -> None:
    if not rankings:
        raise ValueError("no rankings to aggregate")
    absent = [r.task_id for r in rankings if r.correct_rank is None]
    if absent:
        raise ValueError(f"rankings without a correct rank: {absent[:5]}")


def rank_stats(rankings: Sequence[Ranking], metric: str | None = None, level: str | None = None) -> RankStats:
    """Median rank, space reduction and perfect-repair rate over tasks.

    Space reduction is 1 - mean(rank) / mean(pool size); the mean of
    per-task ratios is kept alongside as ``space_reduction_per_task``.
    """
    _present(rankings)
    ranks = [r.correct_rank for r in rankings]
    pools = [r.pool_size for r in rankings]
    mean_rank = sum(ranks) / len(ranks)
    mean_pool = sum(pools) / len(pools)
    return RankStats(
        metric=metric or rankings[0].metric,
        level=level or rankings[0].level,
        tasks=len(rankings),
        median_rank=lower_median(ranks),
        mean_rank=mean_rank,
        mean_pool_size=mean_pool,
        space_reduction=1.0 - mean_rank / mean_pool,
        space_reduction_per_task=1.0 - sum(r / p for r, p in zip(ranks, pools)) / len(ranks),
        perfect_repair_rate=sum(1 for r in ranks if r == 1) / len(ranks),
        normalized_ranks=tuple(r / p for r, p in zip(ranks, pools)),
    )


@dataclass(frozen=True)
class DensityTable:
    """Histogram of normalized ranks over (0, 1] plus the raw values."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]
    values: tuple[float, ...]

    @property
    def density(self) -> tuple[float, ...]:
        width = 1.0 / len(self.counts)
        total = sum(self.counts)
        return tuple(c / (total * width) for c in self.counts)

    def rows(self) -> list[dict]:
        dens = self.density
        return [
            {"bin": i, "lower": self.edges[i], "upper": self.edges[i + 1], "count": c, "density": dens[i]}
            for i, c in enumerate(self.counts)
        ]


def normalized_histogram(values: Sequence[float], bins: int) -> DensityTable:
    if bins < 2:
        raise ValueError("need at least 2 bins")
    if len(values) == 0:
        raise ValueError("no values to bin")
    counts = [0] * bins
    for v in values:
        # right-closed bins: (i/bins, (i+1)/bins]
        i = min(max(math.ceil(v * bins) - 1, 0), bins - 1)
        counts[i] += 1
    edges = tuple(float(e) for e in np.linspace(0.0, 1.0, bins + 1))
    return DensityTable(edges, tuple(counts), tuple(values))


def distribution_export(rankings: Sequence[Ranking], bins: int = 20) -> DensityTable:
    """Density table of normalized correct ranks, for violin/density plots."""
    if bins < 2:
        raise ValueError("need at least 2 bins")
    _present(rankings)
    return normalized_histogram([r.normalized_rank for r in rankings], bins)
