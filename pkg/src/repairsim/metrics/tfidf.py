"""TFIDF weighting over token documents."""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

from ..corpus import SourceComponent
from .vectors import MetricKind, MetricVector


class TfidfModel:
    """Smoothed idf table fitted on a pool of token documents.

    idf(t) = ln((1 + N) / (1 + df(t))) + 1; term frequency is the raw count.
    Vectors are L2-normalised. Tokens never seen during fitting get the idf
    of a token with df = 0.
    """

    def __init__(self, documents: Iterable[Sequence[str]]):
        df: Counter[str] = Counter()
        n = 0
        for doc in documents:
            n += 1
            df.update(set(doc))
        if n == 0:
            raise ValueError("cannot fit TFIDF on an empty pool")
        self.n_documents = n
        self.df = dict(df)
        self.idf = {t: self._idf(c) for t, c in df.items()}

    def _idf(self, df: int) -> float:
        return math.log((1 + self.n_documents) / (1 + df)) + 1.0

    def weight_of(self, term: str) -> float:
        return self.idf.get(term, self._idf(0))

    def vector(self, terms: Sequence[str]) -> MetricVector:
        if not terms:
            return MetricVector(MetricKind.TFIDF, {}, flagged=True)
        weights = {t: c * self.weight_of(t) for t, c in Counter(terms).items()}
        norm = math.sqrt(sum(w * w for w in weights.values()))
        return MetricVector(MetricKind.TFIDF, {t: w / norm for t, w in weights.items()})


def terms_of(component: SourceComponent) -> list[str]:
    return [t.text for t in component.tokens]


def tfidf_fit(pool: Sequence[SourceComponent]) -> tuple[TfidfModel, dict[str, MetricVector]]:
    """Fit on ``pool`` (each component is one document) and vectorise it."""
    docs = [terms_of(c) for c in pool]
    model = TfidfModel(docs)
    return model, {c.id: model.vector(d) for c, d in zip(pool, docs)}
