"""Independent reference implementations used as test oracles.

Each one is written for obviousness, not speed, and shares no code with
the package under test.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction


def lcs_brute_force(a: str, b: str) -> int:
    """Longest common subsequence by enumerating every subsequence of the shorter string."""
    if len(a) > len(b):
        a, b = b, a

    def is_subsequence(s: str, t: str) -> bool:
        it = iter(t)
        return all(ch in it for ch in s)

    for k in range(len(a), 0, -1):
        for idx in itertools.combinations(range(len(a)), k):
            if is_subsequence("".join(a[i] for i in idx), b):
                return k
    return 0


def tfidf_by_hand(documents: list[list[str]]) -> list[dict[str, float]]:
    """Smoothed tf-idf, L2-normalized, spelled out term by term."""
    n = len(documents)
    vocab = sorted({t for d in documents for t in d})
    df = {t: sum(1 for d in documents if t in d) for t in vocab}
    out = []
    for d in documents:
        tf = Counter(d)
        raw = {t: tf[t] * (math.log((1 + n) / (1 + df[t])) + 1) for t in tf}
        norm = math.sqrt(sum(w * w for w in raw.values()))
        out.append({t: w / norm for t, w in raw.items()})
    return out


def _average_ranks(values: list[float]) -> list[Fraction]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = Fraction(i + 1 + j + 1, 2)
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def wilcoxon_enumeration(x: list[float], y: list[float]) -> tuple[int, Fraction, Fraction]:
    """Exact two-sided signed-rank test with rational arithmetic.

    Returns (n, T, p) with zero differences dropped, where p is the share of
    the 2**n sign patterns whose min(W+, W-) is at most the observed T.
    """
    d = [a - b for a, b in zip(x, y) if a != b]
    ranks = _average_ranks([abs(v) for v in d])
    w_plus = sum((r for r, v in zip(ranks, d) if v > 0), Fraction(0))
    w_minus = sum((r for r, v in zip(ranks, d) if v < 0), Fraction(0))
    t = min(w_plus, w_minus)
    total = sum(ranks, Fraction(0))
    hits = 0
    for signs in itertools.product((0, 1), repeat=len(d)):
        wp = sum((r for r, s in zip(ranks, signs) if s), Fraction(0))
        if min(wp, total - wp) <= t:
            hits += 1
    return len(d), t, Fraction(hits, 2 ** len(d))
