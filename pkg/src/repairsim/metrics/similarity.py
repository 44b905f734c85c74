"""Uniform similarity interface over the four metric kinds."""

from __future__ import annotations

from typing import Optional, Protocol, Sequence

import numpy as np

from ..corpus import CorpusIndex, Role, SourceComponent
from .deckard import deckard_vector
from .embedding import EmbeddingModel
from .lcs import lcs_similarity
from .tfidf import TfidfModel, terms_of
from .vectors import MetricKind, MetricVector, UndefinedCosine, cosine


class MissingModel(RuntimeError):
    pass


class Metric(Protocol):
    """Anything ranking can score with: a name plus a batched scorer."""

    name: str

    def score_many(self, query: SourceComponent, candidates: Sequence[SourceComponent]) -> np.ndarray: ...


class MetricContext:
    """Fitted models a metric may need, plus a vector cache.

    TFIDF pools are fitted lazily on the index: statements against the
    statement pool, methods against the method pool. Doc2vec needs one
    trained model per role.

    Every vector metric depends on the token sequence alone, so vectors are
    cached by (kind, role, token key) and shared by equivalent components.
    """

    def __init__(
        self,
        index: Optional[CorpusIndex] = None,
        statement_embedding: Optional[EmbeddingModel] = None,
        method_embedding: Optional[EmbeddingModel] = None,
        deckard_pairs: bool = False,
    ):
        self.index = index
        self.embeddings = {Role.STATEMENT: statement_embedding, Role.METHOD: method_embedding}
        self.deckard_pairs = deckard_pairs
        self._tfidf: dict[Role, TfidfModel] = {}
        self._cache: dict[tuple, MetricVector] = {}

    def tfidf_model(self, role: Role) -> TfidfModel:
        if role not in self._tfidf:
            if self.index is None:
                raise MissingModel("TFIDF needs a corpus index to fit on")
            pool = self.index.statements if role is Role.STATEMENT else self.index.methods
            self._tfidf[role] = TfidfModel([terms_of(c) for c in pool])
        return self._tfidf[role]

    def vector(self, kind: MetricKind, component: SourceComponent) -> MetricVector:
        if kind is MetricKind.LCS:
            raise ValueError("LCS has no vector form")
        key = (kind, component.role, component.key)
        vec = self._cache.get(key)
        if vec is None:
            vec = self._compute(kind, component)
            self._cache[key] = vec
        return vec

    def _compute(self, kind: MetricKind, component: SourceComponent) -> MetricVector:
        if kind is MetricKind.TFIDF:
            return self.tfidf_model(component.role).vector(terms_of(component))
        if kind is MetricKind.DOC2VEC:
            model = self.embeddings[component.role]
            if model is None:
                raise MissingModel(f"DOC2VEC needs a trained {component.role.value} embedding")
            return model.infer_component(component)
        return deckard_vector(component, self.deckard_pairs)

    def metric(self, kind: MetricKind) -> "KindMetric":
        return KindMetric(kind, self)


def similarity(kind: MetricKind, a: SourceComponent, b: SourceComponent, context: Optional[MetricContext] = None) -> float:
    """Similarity of two components under ``kind``.

    Raises:
        ValueError: for LCS on empty text.
        UndefinedCosine: for a cosine metric when either vector is zero.
        MissingModel: when ``context`` lacks a model the metric requires.
    """
    if kind is MetricKind.LCS:
        return lcs_similarity(a.raw_text, b.raw_text)
    if context is None:
        if kind is not MetricKind.DECKARD:
            raise MissingModel(f"{kind.value} needs a metric context")
        context = MetricContext()
    return cosine(context.vector(kind, a), context.vector(kind, b))


class KindMetric:
    """Batched scorer for one MetricKind.

    Candidates whose similarity is undefined (zero vector) score
    ``undefined``; they then sort by position among themselves.
    """

    def __init__(self, kind: MetricKind, context: MetricContext, undefined: float = 0.0):
        self.kind = kind
        self.name = kind.value
        self.context = context
        self.undefined = undefined

    def score_many(self, query: SourceComponent, candidates: Sequence[SourceComponent]) -> np.ndarray:
        out = np.empty(len(candidates))
        if self.kind is MetricKind.LCS:
            for i, c in enumerate(candidates):
                out[i] = lcs_similarity(query.raw_text, c.raw_text)
            return out
        q = self.context.vector(self.kind, query)
        for i, c in enumerate(candidates):
            try:
                out[i] = cosine(q, self.context.vector(self.kind, c))
            except UndefinedCosine:
                out[i] = self.undefined
        return out
