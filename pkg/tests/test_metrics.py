import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repairsim.corpus import NODE_KINDS, NodeKind, segment
from repairsim.metrics import (
    MetricContext,
    MetricKind,
    MetricVector,
    TfidfModel,
    UndefinedCosine,
    cosine,
    deckard_vector,
    lcs_length,
    lcs_length_dp,
    lcs_similarity,
    similarity,
    tfidf_fit,
)
from conftest import stmt
from oracles import lcs_brute_force, tfidf_by_hand
from strategies import rename_identifiers, statement_texts, statements

# --- LCS --------------------------------------------------------------------


@pytest.mark.parametrize("a, b, expected", [("abc", "abc", 1.0), ("port1", "port2", 0.8), ("abc", "xyz", 0.0)])
def test_lcs_examples(a, b, expected):
    assert lcs_similarity(a, b) == pytest.approx(expected, abs=1e-12)


def test_lcs_empty_text_is_an_error():
    with pytest.raises(ValueError):
        lcs_similarity("", "abc")
    with pytest.raises(ValueError):
        lcs_similarity("abc", "")


def test_lcs_matches_brute_force():
    rng = random.Random(1)
    for _ in range(300):
        a = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 10)))
        b = "".join(rng.choice("abcd") for _ in range(rng.randint(0, 10)))
        expected = lcs_brute_force(a, b)
        assert lcs_length_dp(a, b) == expected
        assert lcs_length(a, b) == expected


@settings(max_examples=500, deadline=None)
@given(st.text(min_size=0, max_size=200), st.text(min_size=0, max_size=200))
def test_bit_parallel_lcs_equals_dynamic_program(a, b):
    assert lcs_length(a, b) == lcs_length_dp(a, b)


@settings(max_examples=500, deadline=None)
@given(st.text(min_size=1, max_size=40), st.text(min_size=1, max_size=40))
def test_lcs_similarity_symmetric_and_bounded(a, b):
    s = lcs_similarity(a, b)
    assert s == lcs_similarity(b, a)
    assert 0.0 <= s <= 1.0
    assert lcs_similarity(a, a) == 1.0


# --- TFIDF ------------------------------------------------------------------

HAND = [["a", "b"], ["a", "c"], ["a", "d"]]


def test_tfidf_hand_corpus_weights():
    model = TfidfModel(HAND)
    # N = 3: idf(a) = ln(4/4) + 1 = 1, idf(b) = ln(4/2) + 1
    assert model.weight_of("a") == pytest.approx(1.0, abs=1e-12)
    assert model.weight_of("b") == pytest.approx(1 + math.log(2), abs=1e-12)
    norm = math.sqrt(1 + (1 + math.log(2)) ** 2)
    v = model.vector(["a", "b"]).payload
    assert v["a"] == pytest.approx(1 / norm, abs=1e-9)
    assert v["b"] == pytest.approx((1 + math.log(2)) / norm, abs=1e-9)
    assert v["a"] < v["b"]
    for doc, expected in zip(HAND, tfidf_by_hand(HAND)):
        got = model.vector(doc).payload
        assert got.keys() == expected.keys()
        for t in got:
            assert got[t] == pytest.approx(expected[t], abs=1e-9)


def test_tfidf_hand_corpus_cosines():
    model = TfidfModel(HAND)
    vs = [model.vector(d) for d in HAND]
    expected = 1 / (1 + (1 + math.log(2)) ** 2)
    for i in range(3):
        assert cosine(vs[i], vs[i]) == pytest.approx(1.0, abs=1e-9)
        for j in range(i + 1, 3):
            assert cosine(vs[i], vs[j]) == pytest.approx(expected, abs=1e-9)


def test_tfidf_single_document_uniform_weights():
    v = TfidfModel([["p", "q", "r"]]).vector(["p", "q", "r"]).payload
    assert len(set(round(w, 12) for w in v.values())) == 1


def test_tfidf_zero_tokens_flagged():
    v = TfidfModel(HAND).vector([])
    assert v.flagged and v.norm() == 0.0


@settings(max_examples=500, deadline=None)
@given(st.lists(st.lists(st.sampled_from("abcdefg"), min_size=1, max_size=6), min_size=1, max_size=8))
def test_idf_monotone_in_document_frequency(docs):
    model = TfidfModel(docs)
    for t1, df1 in model.df.items():
        for t2, df2 in model.df.items():
            if df1 < df2:
                assert model.idf[t1] > model.idf[t2]
    for t in model.df:
        assert model.idf[t] >= 1.0 - 1e-12


def test_tfidf_fit_over_components():
    pool = [stmt("a = b;"), stmt("a = c;", line=2)]
    model, vectors = tfidf_fit(pool)
    assert model.n_documents == 2
    assert set(vectors) == {c.id for c in pool}
    assert all(w >= 0 for v in vectors.values() for w in v.payload.values())


# --- cosine -----------------------------------------------------------------


def dense(values):
    return MetricVector(MetricKind.DECKARD, np.asarray(values, dtype=float))


def test_cosine_examples():
    assert cosine(dense([1, 1, 0]), dense([1, 0, 1])) == pytest.approx(0.5, abs=1e-12)
    assert cosine(dense([0, 3, 0]), dense([0, 3, 0])) == pytest.approx(1.0, abs=1e-12)
    assert cosine(dense([1, 0]), dense([0, 1])) == 0.0


def test_cosine_zero_vector_is_undefined():
    with pytest.raises(UndefinedCosine, match="undefined cosine"):
        cosine(dense([0, 0]), dense([1, 0]))


finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False).filter(lambda x: abs(x) > 1e-3 or x == 0)


@settings(max_examples=500, deadline=None)
@given(
    st.lists(finite, min_size=4, max_size=4),
    st.lists(finite, min_size=4, max_size=4),
    st.floats(min_value=1e-3, max_value=1e3),
)
def test_cosine_symmetric_and_scale_invariant(u, v, c):
    if not any(u) or not any(v):
        return
    a, b = dense(u), dense(v)
    assert cosine(a, b) == pytest.approx(cosine(b, a), abs=1e-9)
    assert cosine(a.scaled(c), b) == pytest.approx(cosine(a, b), abs=1e-9)
    assert -1.0 <= cosine(a, b) <= 1.0


@settings(max_examples=500, deadline=None)
@given(
    st.dictionaries(st.sampled_from("abcdef"), st.floats(min_value=0.01, max_value=10), min_size=1),
    st.dictionaries(st.sampled_from("abcdef"), st.floats(min_value=0.01, max_value=10), min_size=1),
    st.floats(min_value=1e-3, max_value=1e3),
)
def test_sparse_cosine_scale_invariant(u, v, c):
    a, b = MetricVector(MetricKind.TFIDF, u), MetricVector(MetricKind.TFIDF, v)
    assert cosine(a.scaled(c), b) == pytest.approx(cosine(a, b), abs=1e-9)
    assert cosine(a, b) == pytest.approx(cosine(b, a), abs=1e-9)


# --- Deckard ----------------------------------------------------------------


def counts(component):
    vec = deckard_vector(component).payload
    return {k: int(vec[i]) for i, k in enumerate(NODE_KINDS) if vec[i]}


def test_deckard_return():
    assert counts(stmt("return;")) == {NodeKind.RETURN: 1}


def test_deckard_assignment_of_call():
    assert counts(stmt("x = f(a);")) == {
        NodeKind.ASSIGNMENT: 1,
        NodeKind.CALL: 1,
        NodeKind.ARGUMENT_LIST: 1,
        NodeKind.IDENTIFIER: 3,
    }


@settings(max_examples=500, deadline=None)
@given(statements())
def test_deckard_counts_sum_to_tree_size(c):
    vec = deckard_vector(c).payload
    assert vec.sum() == c.ast.size()
    assert (vec >= 0).all() and np.array_equal(vec, np.round(vec))


@settings(max_examples=500, deadline=None)
@given(statement_texts(), st.integers(0, 99))
def test_deckard_renaming_invariance(text, seed):
    original = stmt(text)
    renamed = stmt(rename_identifiers(text, seed))
    assert np.array_equal(deckard_vector(original).payload, deckard_vector(renamed).payload)
    assert np.array_equal(deckard_vector(original, True).payload, deckard_vector(renamed, True).payload)
    assert similarity(MetricKind.DECKARD, original, renamed) == pytest.approx(1.0, abs=1e-9)


def test_deckard_equivalent_components_identical():
    a, b = stmt("y = g(b) + 1;"), stmt("y  =  g( b )+1 ;", line=9)
    assert np.array_equal(deckard_vector(a).payload, deckard_vector(b).payload)


# --- uniform similarity -----------------------------------------------------

POOL_SRC = """class P {
    void one() {
        int total = price * count;
        total = total + tax(total);
        return;
    }
    int two(int count) {
        if (count > limit) {
            count = limit;
        }
        log.info("two");
        return count * 2;
    }
}
"""


@pytest.fixture(scope="module")
def context(tmp_path_factory):
    from repairsim.corpus import build_index

    root = tmp_path_factory.mktemp("pool")
    (root / "P.java").write_text(POOL_SRC)
    return MetricContext(build_index(root))


def test_similarity_examples(context):
    a = stmt("total = total + tax(total);")
    assert similarity(MetricKind.LCS, a, a) == 1.0
    assert similarity(MetricKind.TFIDF, stmt("alpha = beta;"), stmt("if (gamma) {"), context) == 0.0
    assert similarity(MetricKind.TFIDF, a, a, context) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=500, deadline=None)
@given(statements(), statements())
def test_metric_laws(context, a, b):
    for kind in (MetricKind.LCS, MetricKind.TFIDF, MetricKind.DECKARD):
        ab = similarity(kind, a, b, context)
        assert ab == pytest.approx(similarity(kind, b, a, context), abs=1e-9)
        assert similarity(kind, a, a, context) == pytest.approx(1.0, abs=1e-9)


def test_method_level_similarity(context):
    methods = context.index.methods
    for kind in (MetricKind.LCS, MetricKind.TFIDF, MetricKind.DECKARD):
        assert similarity(kind, methods[0], methods[0], context) == pytest.approx(1.0, abs=1e-9)
        s = similarity(kind, methods[0], methods[1], context)
        assert s == pytest.approx(similarity(kind, methods[1], methods[0], context), abs=1e-12)
        assert 0.0 <= s < 1.0


def test_doc2vec_without_model_is_reported(context):
    from repairsim.metrics import MissingModel

    with pytest.raises(MissingModel):
        similarity(MetricKind.DOC2VEC, stmt("a = b;"), stmt("a = c;"), context)


def test_metric_kind_parse():
    assert MetricKind.parse(" tfidf ") is MetricKind.TFIDF
    assert [k.value for k in MetricKind] == ["LCS", "TFIDF", "DOC2VEC", "DECKARD"]
    with pytest.raises(ValueError):
        MetricKind.parse("bleu")
