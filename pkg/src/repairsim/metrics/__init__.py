from .deckard import count_vector, deckard_vector
from .embedding import (
    METHOD_DIMENSION,
    STATEMENT_DIMENSION,
    EmbeddingConfig,
    EmbeddingError,
    EmbeddingModel,
    embed_infer,
    embed_train,
    model_digest,
    train_embedding,
)
from .lcs import lcs_length, lcs_length_dp, lcs_similarity
from .similarity import KindMetric, Metric, MetricContext, MissingModel, similarity
from .tfidf import TfidfModel, tfidf_fit
from .vectors import MetricKind, MetricVector, UndefinedCosine, cosine

__all__ = [
    "EmbeddingConfig",
    "EmbeddingError",
    "EmbeddingModel",
    "KindMetric",
    "METHOD_DIMENSION",
    "Metric",
    "MetricContext",
    "MetricKind",
    "MetricVector",
    "MissingModel",
    "STATEMENT_DIMENSION",
    "TfidfModel",
    "UndefinedCosine",
    "cosine",
    "count_vector",
    "deckard_vector",
    "embed_infer",
    "embed_train",
    "lcs_length",
    "lcs_length_dp",
    "lcs_similarity",
    "model_digest",
    "similarity",
    "tfidf_fit",
    "train_embedding",
]
