import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repairsim.corpus import (
    CorpusError,
    CorpusIndex,
    LexError,
    NodeKind,
    Role,
    SegmentationError,
    TokenKind,
    build_index,
    lex,
    parse_ast,
    segment,
)
from conftest import stmt, write_tree

# --- lexing -----------------------------------------------------------------


def test_lex_minimal_statement():
    toks = lex("return x;")
    assert [(t.kind, t.text) for t in toks] == [
        (TokenKind.KEYWORD, "return"),
        (TokenKind.IDENTIFIER, "x"),
        (TokenKind.SEPARATOR, ";"),
    ]


def test_lex_drops_line_comment():
    toks = lex("a=b+1; // c")
    assert [t.text for t in toks] == ["a", "=", "b", "+", "1", ";"]


def test_lex_empty():
    assert lex("") == []


def test_lex_literals_keep_quotes():
    toks = lex("s = \"a // not a comment\" + 'x';")
    texts = [t.text for t in toks]
    assert '"a // not a comment"' in texts
    assert "'x'" in texts
    kinds = {t.text: t.kind for t in toks}
    assert kinds["'x'"] is TokenKind.CHAR
    assert kinds['"a // not a comment"'] is TokenKind.STRING


def test_lex_positions_are_one_based():
    toks = lex("a\n  b")
    assert (toks[0].line, toks[0].column) == (1, 1)
    assert (toks[1].line, toks[1].column) == (2, 3)


def test_lex_block_comment_removed():
    assert [t.text for t in lex("a /* b\n c */ d")] == ["a", "d"]


@pytest.mark.parametrize("source, line", [('x = 1;\ny = "abc;\n', 2), ("a;\n\n/* open\n", 3), ("c = 'x", 1)])
def test_lex_unterminated_names_line(source, line):
    with pytest.raises(LexError) as err:
        lex(source)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


source_chars = st.text(alphabet="ab1 ;=+(){}.,<>\n\t!&|*-", max_size=60)


@settings(max_examples=300, deadline=None)
@given(source_chars)
def test_tokens_are_never_blank(source):
    for t in lex(source):
        assert t.text and not t.text.isspace()
        assert t.line >= 1 and t.column >= 1


# --- segmentation -----------------------------------------------------------

THREE_STATEMENTS = """class A {
    void f() {
        int x = 1;
        x++;
        return;
    }
}
"""

NESTED = """class Outer {
    int field = 0;
    void outer() {
        a = 1;
        Runnable r = new Runnable() {
            public void run() {
                y = 2;
            }
        };
        b = 3;
    }
}
"""


def test_segment_one_method_three_statements():
    seg = segment(THREE_STATEMENTS, "A.java")
    assert len(seg.methods) == 1
    assert [s.raw_text for s in seg.statements] == ["int x = 1;", "x++;", "return;"]
    assert set(seg.containment.values()) == {seg.methods[0].id}


def test_segment_innermost_method_wins():
    seg = segment(NESTED, "Outer.java")
    methods = {m.id: m for m in seg.methods}
    by_text = {s.raw_text: methods[seg.containment[s.id]] for s in seg.statements}
    assert by_text["y = 2;"].span == (6, 8)
    assert by_text["a = 1;"].span == (3, 11)
    assert by_text["b = 3;"].span == (3, 11)


def test_segment_fields_only():
    seg = segment("class C {\n  int a = 1;\n  String b;\n}\n", "C.java")
    assert seg.methods == [] or len(seg.methods) == 0
    assert len(seg.statements) == 0


def test_segment_unbalanced_braces():
    with pytest.raises(SegmentationError) as err:
        segment("class A {\n void f() {\n x = 1;\n}\n", "A.java")
    assert "A.java" in str(err.value)
    assert err.value.line >= 1


def test_multi_line_statement_is_joined():
    src = "class A {\n void f() {\n  total = first\n     + second;\n }\n}\n"
    seg = segment(src, "A.java")
    (s,) = seg.statements
    assert s.span == (3, 4)
    assert [t.text for t in s.tokens] == ["total", "=", "first", "+", "second", ";"]


def test_headers_are_statements():
    src = "class A {\n void f() {\n  if (a > b) {\n   a = b;\n  }\n  while (x) y();\n }\n}\n"
    texts = [s.raw_text for s in segment(src, "A.java").statements]
    assert "if (a > b)" in texts
    assert "a = b;" in texts
    assert "y();" in texts


# --- ASTs -------------------------------------------------------------------


def test_ast_assignment_of_call():
    assert parse_ast(stmt("x = f(a);")).to_sexpr() == "assignment(identifier, call(identifier, argument-list(identifier)))"


def test_ast_bare_return():
    tree = parse_ast(stmt("return;"))
    assert tree.kind is NodeKind.RETURN
    assert tree.children == ()


@pytest.mark.parametrize("soup", ["+ + ) ( ;", "= = 3 ] ;", ") ) ) ;"])
def test_ast_garbage_is_unknown(soup):
    tree = parse_ast(stmt(soup))
    assert tree.kind is NodeKind.UNKNOWN
    assert tree.children == ()


# --- index ------------------------------------------------------------------


def _method(name: str, n: int) -> str:
    body = "".join(f"        v{name}{i} = {name}.step({i});\n" for i in range(n))
    return f"    void {name}() {{\n{body}    }}\n"


TWO_FILES = {
    "src/A.java": "class A {\n" + _method("a1", 4) + _method("a2", 4) + _method("a3", 4) + "}\n",
    "src/B.java": "class B {\n" + _method("b1", 4) + _method("b2", 4) + "}\n",
}


def test_build_index_two_file_fixture(tmp_path):
    idx = build_index(write_tree(tmp_path, TWO_FILES))
    assert len(idx.methods) == 5
    assert len(idx.statements) == 20
    assert list(idx.files) == ["src/A.java", "src/B.java"]


def test_build_index_skips_unparsable_file(tmp_path):
    files = dict(TWO_FILES)
    files["src/C.java"] = "class C {\n void f() {\n x = \"open;\n }\n}\n"
    idx = build_index(write_tree(tmp_path, files))
    assert len(idx.files) == 2
    assert len(idx.diagnostics) == 1
    assert idx.diagnostics[0].path == "src/C.java"


def test_build_index_empty_directory(tmp_path):
    with pytest.raises(CorpusError, match="empty corpus"):
        build_index(tmp_path)


def test_build_index_is_idempotent(tmp_path):
    root = write_tree(tmp_path, TWO_FILES)
    a, b = build_index(root), build_index(root)
    assert [c.id for c in a] == [c.id for c in b]
    assert a.containment == b.containment
    assert a.to_lines() == b.to_lines()


def test_build_index_parallel_matches_serial(tmp_path):
    root = write_tree(tmp_path, TWO_FILES)
    assert build_index(root, jobs=2).to_lines() == build_index(root).to_lines()


def test_index_round_trip(tmp_path):
    idx = build_index(write_tree(tmp_path / "src", TWO_FILES))
    idx.save(tmp_path / "index.jsonl")
    back = CorpusIndex.load(tmp_path / "index.jsonl")
    assert back.to_lines() == idx.to_lines()
    assert back.containment == idx.containment


def test_index_rejects_other_files(tmp_path):
    p = tmp_path / "x.jsonl"
    p.write_text('{"format": "something-else"}\n')
    with pytest.raises(CorpusError):
        CorpusIndex.load(p)


def test_relex_round_trip_and_containment(planted_run):
    idx = planted_run.index
    for c in idx:
        assert tuple(t.key for t in lex(c.raw_text)) == c.key
    method_ids = {m.id for m in idx.methods}
    for s in idx.statements:
        assert idx.containment[s.id] in method_ids
        assert idx.enclosing(s).contains(s)
        assert s.role is Role.STATEMENT


STATEMENTS = ["x = 1;", "x  =  1 ;", "x = 2;", "return x;", "return  x ;", "y = x;", "x = 1; // note"]


@settings(max_examples=500, deadline=None)
@given(st.sampled_from(STATEMENTS), st.sampled_from(STATEMENTS), st.sampled_from(STATEMENTS))
def test_equivalence_is_an_equivalence_relation(a, b, c):
    x, y, z = stmt(a), stmt(b, line=2), stmt(c, line=3)
    assert x.equivalent(x)
    assert x.equivalent(y) == y.equivalent(x)
    if x.equivalent(y) and y.equivalent(z):
        assert x.equivalent(z)


def test_equivalence_ignores_layout_and_comments():
    assert stmt("x = 1;").equivalent(stmt("x  =\t1 ; /* c */"))
    assert not stmt("x = 1;").equivalent(stmt("x = 2;"))
