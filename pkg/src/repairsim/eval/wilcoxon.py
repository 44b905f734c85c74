"""Two-sided Wilcoxon signed-rank test on paired samples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

ALPHA = 0.01
EXACT_MAX_N = 12
MIN_PAIRS = 6


class DegenerateSample(ValueError):
    def __init__(self) -> None:
        super().__init__("degenerate sample")


@dataclass(frozen=True)
class WilcoxonResult:
    n: int
    T: float
    p: float
    method: str  # "exact" or "normal"
    alpha: float = ALPHA

    @property
    def reject(self) -> bool:
        return self.p < self.alpha

    def to_dict(self) -> dict:
        return {"n": self.n, "T": self.T, "p": self.p, "method": self.method, "reject": self.reject}


def signed_ranks(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Average ranks of |x - y| and the sign of each difference, zeros dropped."""
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    d = d[d != 0]
    return rankdata(np.abs(d)), np.sign(d)


def exact_p(ranks: np.ndarray, t: float) -> float:
    """P(min(W+, W-) <= t) over all 2**n equally likely sign assignments."""
    n = ranks.size
    bits = (np.arange(2**n)[:, None] >> np.arange(n)) & 1
    w_plus = bits @ ranks
    w_min = np.minimum(w_plus, ranks.sum() - w_plus)
    return float(np.mean(w_min <= t + 1e-9))


def normal_p(ranks: np.ndarray, t: float) -> float:
    """Normal approximation with tie and continuity corrections."""
    n = ranks.size
    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    if var <= 0:
        return 1.0
    z = max(abs(t - mean) - 0.5, 0.0) / math.sqrt(var)
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


def wilcoxon_signed_rank(
    x: Sequence[float],
    y: Sequence[float],
    alpha: float = ALPHA,
    exact_max_n: int = EXACT_MAX_N,
) -> WilcoxonResult:
    """Test whether paired samples ``x`` and ``y`` come from the same distribution.

    Zero differences are dropped. T is min(W+, W-). The p-value is exact by
    enumeration up to ``exact_max_n`` non-zero pairs, otherwise from the
    normal approximation.

    Raises:
        ValueError: if the samples differ in length or have fewer than 6 pairs.
        DegenerateSample: if every difference is zero.
    """
    if len(x) != len(y):
        raise ValueError(f"paired samples differ in length: {len(x)} vs {len(y)}")
    if len(x) < MIN_PAIRS:
        raise ValueError(f"need at least {MIN_PAIRS} pairs, got {len(x)}")
    ranks, signs = signed_ranks(x, y)
    if ranks.size == 0:
        raise DegenerateSample()
    w_plus = float(ranks[signs > 0].sum())
    w_minus = float(ranks[signs < 0].sum())
    t = min(w_plus, w_minus)
    if ranks.size <= exact_max_n:
        return WilcoxonResult(int(ranks.size), t, exact_p(ranks, t), "exact", alpha)
    return WilcoxonResult(int(ranks.size), t, normal_p(ranks, t), "normal", alpha)
