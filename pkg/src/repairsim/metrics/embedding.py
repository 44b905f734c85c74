"""Paragraph-vector document embeddings for token sequences.

Distributed bag-of-words (PV-DBOW) with negative sampling. Token vectors are
trained jointly by interleaving skip-gram updates, so the output word matrix
that document vectors are inferred against is shaped by local token context
and not only by document co-occurrence.

Everything runs single-threaded off one seeded generator, which makes training
and inference bit-for-bit reproducible.
"""

from __future__ import annotations

import base64
import hashlib
import json
from collections import Counter
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import expit as _sigmoid

from ..corpus import SourceComponent
from .vectors import MetricKind, MetricVector

MODEL_FORMAT = "repairsim-embedding"
MODEL_VERSION = 1

STATEMENT_DIMENSION = 128
METHOD_DIMENSION = 300


@dataclass(frozen=True)
class EmbeddingConfig:
    dimension: int = STATEMENT_DIMENSION
    window: int = 5
    epochs: int = 20
    negative: int = 5
    min_count: int = 1
    alpha: float = 0.025
    min_alpha: float = 0.0001
    infer_epochs: int = 0  # 0 means: same as epochs
    train_words: bool = True
    seed: int = 0

    def with_dimension(self, dimension: int) -> "EmbeddingConfig":
        return replace(self, dimension=dimension)


class EmbeddingError(ValueError):
    pass


def _scatter_add(target: np.ndarray, rows: np.ndarray, values: np.ndarray) -> None:
    # fancy-index += drops repeated rows, so fall back to add.at only then
    if len(set(rows.tolist())) == rows.size:
        target[rows] += values
    else:
        np.add.at(target, rows, values)


def _tokens_seed(seed: int, terms: Sequence[str]) -> int:
    h = hashlib.sha256(str(seed).encode())
    for t in terms:
        h.update(b"\x00" + t.encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "little")


class EmbeddingModel:
    """A trained paragraph-vector model.

    Attributes:
        words: vocabulary in index order.
        word_vectors: |V| x d input token vectors (skip-gram side).
        output_weights: |V| x d negative-sampling output matrix; document
            vectors are inferred against this matrix.
    """

    def __init__(
        self,
        words: Sequence[str],
        counts: Sequence[int],
        word_vectors: np.ndarray,
        output_weights: np.ndarray,
        config: EmbeddingConfig,
    ):
        self.words = list(words)
        self.vocabulary = {w: i for i, w in enumerate(self.words)}
        self.counts = np.asarray(counts, dtype=np.int64)
        self.word_vectors = word_vectors
        self.output_weights = output_weights
        self.config = config
        weights = self.counts.astype(np.float64) ** 0.75
        self._cum = np.cumsum(weights / weights.sum())

    @property
    def dimension(self) -> int:
        return self.config.dimension

    def encode(self, terms: Sequence[str]) -> np.ndarray:
        return np.array([self.vocabulary[t] for t in terms if t in self.vocabulary], dtype=np.int64)

    def sample_negatives(self, rng: np.random.Generator, shape) -> np.ndarray:
        idx = np.searchsorted(self._cum, rng.random(shape), side="right")
        return np.minimum(idx, len(self.words) - 1)

    def infer(self, terms: Sequence[str]) -> MetricVector:
        """Infer a document vector with the word matrix frozen.

        Returns a flagged zero vector when no term is in the vocabulary.
        """
        ids = self.encode(terms)
        d = self.config.dimension
        if ids.size == 0:
            return MetricVector(MetricKind.DOC2VEC, np.zeros(d), flagged=True)
        cfg = self.config
        rng = np.random.default_rng(_tokens_seed(cfg.seed, terms))
        vec = (rng.random(d) - 0.5) / d
        epochs = cfg.infer_epochs or cfg.epochs
        negs = self.sample_negatives(rng, (epochs, ids.size, cfg.negative))
        out = self.output_weights
        for epoch in range(epochs):
            alpha = cfg.alpha - (cfg.alpha - cfg.min_alpha) * epoch / max(epochs, 1)
            for pos, w in enumerate(ids):
                targets = np.concatenate(([w], negs[epoch, pos]))
                labels = np.zeros(targets.size)
                labels[0] = 1.0
                mask = np.ones(targets.size)
                mask[1:][targets[1:] == w] = 0.0
                g = (labels - _sigmoid(out[targets] @ vec)) * alpha * mask
                vec = vec + g @ out[targets]
        return MetricVector(MetricKind.DOC2VEC, vec)

    def infer_component(self, component: SourceComponent) -> MetricVector:
        return self.infer([t.text for t in component.tokens])

    # persistence ---------------------------------------------------------

    def to_json(self) -> str:
        def enc(a: np.ndarray) -> str:
            return base64.b64encode(np.ascontiguousarray(a, dtype="<f8").tobytes()).decode("ascii")

        doc = {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "config": asdict(self.config),
            "words": self.words,
            "counts": self.counts.tolist(),
            "word_vectors": enc(self.word_vectors),
            "output_weights": enc(self.output_weights),
        }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("format") != MODEL_FORMAT or doc.get("version") != MODEL_VERSION:
            raise EmbeddingError(f"{path}: not a version-{MODEL_VERSION} embedding model")
        cfg = EmbeddingConfig(**doc["config"])
        shape = (len(doc["words"]), cfg.dimension)

        def dec(s: str) -> np.ndarray:
            return np.frombuffer(base64.b64decode(s), dtype="<f8").reshape(shape).copy()

        return cls(doc["words"], doc["counts"], dec(doc["word_vectors"]), dec(doc["output_weights"]), cfg)


def train_embedding(documents: Sequence[Sequence[str]], config: EmbeddingConfig) -> EmbeddingModel:
    """Train a PV-DBOW model on token documents.

    Raises:
        EmbeddingError: with fewer than 2 documents or 10 distinct tokens.
    """
    if len(documents) < 2:
        raise EmbeddingError("embedding training needs at least 2 components")
    counts = Counter(t for doc in documents for t in doc)
    if len(counts) < 10:
        raise EmbeddingError("embedding training needs at least 10 distinct tokens")
    words = sorted((w for w, c in counts.items() if c >= config.min_count), key=lambda w: (-counts[w], w))
    if not words:
        raise EmbeddingError("no token reaches min_count")
    d = config.dimension
    rng = np.random.default_rng(config.seed)
    v = len(words)
    word_vectors = (rng.random((v, d)) - 0.5) / d
    output = np.zeros((v, d))
    model = EmbeddingModel(words, [counts[w] for w in words], word_vectors, output, config)
    encoded = [model.encode(doc) for doc in documents]
    doc_vectors = (rng.random((len(documents), d)) - 0.5) / d
    total = config.epochs * len(encoded)
    step = 0
    k = config.negative
    for _ in range(config.epochs):
        for doc_index in rng.permutation(len(encoded)):
            ids = encoded[doc_index]
            alpha = config.alpha - (config.alpha - config.min_alpha) * step / total
            step += 1
            if ids.size == 0:
                continue
            negs = model.sample_negatives(rng, (ids.size, k))
            reduced = rng.integers(0, config.window, size=ids.size) if config.train_words else None
            for pos, w in enumerate(ids):
                targets = np.concatenate(([w], negs[pos]))
                labels = np.zeros(k + 1)
                labels[0] = 1.0
                mask = np.ones(k + 1)
                mask[1:][targets[1:] == w] = 0.0
                # document -> token
                dv = doc_vectors[doc_index]
                g = (labels - _sigmoid(output[targets] @ dv)) * alpha * mask
                doc_vectors[doc_index] = dv + g @ output[targets]
                _scatter_add(output, targets, np.outer(g, dv))
                if reduced is None:
                    continue
                # context token -> token (skip-gram)
                b = int(reduced[pos])
                lo, hi = max(0, pos - config.window + b), pos + config.window + 1 - b
                ctx = np.concatenate((ids[lo:pos], ids[pos + 1 : hi]))
                if ctx.size == 0:
                    continue
                inputs = word_vectors[ctx]
                gm = (labels[None, :] - _sigmoid(inputs @ output[targets].T)) * alpha * mask[None, :]
                _scatter_add(word_vectors, ctx, gm @ output[targets])
                _scatter_add(output, targets, gm.T @ inputs)
    return model


def embed_train(corpus: Sequence[SourceComponent], config: EmbeddingConfig) -> EmbeddingModel:
    return train_embedding([[t.text for t in c.tokens] for c in corpus], config)


def embed_infer(model: EmbeddingModel, component: SourceComponent) -> MetricVector:
    return model.infer_component(component)


def model_digest(model: EmbeddingModel) -> str:
    return hashlib.sha256(model.to_json().encode("utf-8")).hexdigest()
