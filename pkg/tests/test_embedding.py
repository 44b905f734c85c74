import itertools

import numpy as np
import pytest

from repairsim.corpus import build_index
from repairsim.fixtures import TOPIC_A, two_topic
from repairsim.metrics import (
    EmbeddingConfig,
    EmbeddingError,
    EmbeddingModel,
    MetricKind,
    cosine,
    embed_infer,
    embed_train,
    model_digest,
    train_embedding,
)

FAST = EmbeddingConfig(dimension=32, epochs=5, seed=3)

DOCS = [
    ["open", "valve", "pump", "flow", "pressure"],
    ["close", "valve", "pump", "drain", "pressure"],
    ["font", "glyph", "kern", "serif", "ink"],
    ["page", "glyph", "margin", "serif", "line"],
]


@pytest.fixture(scope="module")
def small_model():
    return train_embedding(DOCS, FAST)


def test_training_is_deterministic(small_model):
    again = train_embedding(DOCS, FAST)
    assert np.array_equal(small_model.word_vectors, again.word_vectors)
    assert np.array_equal(small_model.output_weights, again.output_weights)
    assert model_digest(small_model) == model_digest(again)


def test_seed_changes_the_model(small_model):
    other = train_embedding(DOCS, EmbeddingConfig(dimension=32, epochs=5, seed=4))
    assert not np.array_equal(small_model.output_weights, other.output_weights)


def test_inference_is_deterministic(small_model):
    a = small_model.infer(["valve", "pump"]).payload
    b = small_model.infer(["valve", "pump"]).payload
    assert np.array_equal(a, b)
    assert a.shape == (32,)


def test_single_repeated_token_is_finite_and_nonzero(small_model):
    v = small_model.infer(["valve"] * 4)
    assert not v.flagged
    assert np.isfinite(v.payload).all() and np.linalg.norm(v.payload) > 0


def test_out_of_vocabulary_is_flagged_zero(small_model):
    v = small_model.infer(["nothing", "known"])
    assert v.flagged
    assert not v.payload.any()


@pytest.mark.parametrize(
    "docs",
    [[["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]], [["a", "b"], ["c", "d"]]],
    ids=["one-document", "nine-distinct-tokens"],
)
def test_corpus_below_minimum_size(docs):
    with pytest.raises(EmbeddingError):
        train_embedding(docs, FAST)


def test_save_and_load_round_trip(small_model, tmp_path):
    p = tmp_path / "m.json"
    small_model.save(p)
    back = EmbeddingModel.load(p)
    assert back.words == small_model.words
    assert back.config == small_model.config
    assert np.array_equal(back.output_weights, small_model.output_weights)
    assert np.array_equal(back.infer(["ink", "serif"]).payload, small_model.infer(["ink", "serif"]).payload)
    assert p.read_text() == back.to_json()


def test_load_rejects_other_files(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"format": "other", "version": 1}')
    with pytest.raises(EmbeddingError):
        EmbeddingModel.load(p)


@pytest.fixture(scope="module")
def topic_index(tmp_path_factory):
    app, _ = two_topic().write(tmp_path_factory.mktemp("topics"))
    return build_index(app)


def topic_gap(index, model):
    vecs = {s.id: embed_infer(model, s) for s in index.statements}
    is_a = {s.id: any(t.text in TOPIC_A for t in s.tokens) for s in index.statements}
    intra, inter = [], []
    for x, y in itertools.combinations(index.statements, 2):
        c = cosine(vecs[x.id], vecs[y.id])
        (intra if is_a[x.id] == is_a[y.id] else inter).append(c)
    return float(np.mean(intra) - np.mean(inter))


def test_two_topic_separation_fast_config(topic_index):
    model = embed_train(topic_index.statements, EmbeddingConfig(dimension=64, epochs=20, seed=5))
    assert topic_gap(topic_index, model) > 0.1


def test_inferred_dimensions(topic_index):
    cfg = EmbeddingConfig(epochs=2, seed=1)
    st = embed_train(topic_index.statements, cfg.with_dimension(128))
    me = embed_train(topic_index.methods, cfg.with_dimension(300))
    assert {embed_infer(st, s).payload.shape for s in topic_index.statements} == {(128,)}
    assert {embed_infer(me, m).payload.shape for m in topic_index.methods} == {(300,)}
    assert embed_infer(st, topic_index.statements[0]).kind is MetricKind.DOC2VEC
