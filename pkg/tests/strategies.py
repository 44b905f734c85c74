"""Hypothesis strategies producing small, valid Java statements."""

from hypothesis import strategies as st

from repairsim.corpus import KEYWORDS, TokenKind, lex, statement_from_text

names = st.sampled_from(["a", "b", "count", "total", "item", "list", "Node", "x1", "_tmp", "value"])
literals = st.sampled_from(["0", "1", "42", '"s"', "'c'", "true", "null", "2.5"])
binops = st.sampled_from(["+", "-", "*", "/", "==", "<", "&&", "||", "%"])


@st.composite
def expressions(draw, depth=2):
    choice = draw(st.integers(0, 5 if depth > 0 else 1))
    if choice == 0:
        return draw(names)
    if choice == 1:
        return draw(literals)
    if choice == 2:
        return f"{draw(expressions(depth - 1))} {draw(binops)} {draw(expressions(depth - 1))}"
    if choice == 3:
        args = draw(st.lists(expressions(depth - 1), max_size=3))
        return f"{draw(names)}({', '.join(args)})"
    if choice == 4:
        return f"{draw(names)}.{draw(names)}({draw(expressions(depth - 1))})"
    return f"!({draw(expressions(depth - 1))})"


@st.composite
def statement_texts(draw):
    e = draw(expressions())
    form = draw(st.integers(0, 5))
    if form == 0:
        return f"{draw(names)} = {e};"
    if form == 1:
        return f"int {draw(names)} = {e};"
    if form == 2:
        return f"return {e};"
    if form == 3:
        return f"{draw(names)}({e});"
    if form == 4:
        return f"if ({e}) {{"
    return f"{draw(names)} += {e};"


def statements():
    return statement_texts().map(lambda t: statement_from_text(t, "P.java", 1))


def rename_identifiers(text: str, mapping_seed: int) -> str:
    """Consistently rename every identifier token, keeping layout-free token order."""
    out = []
    fresh: dict[str, str] = {}
    for t in lex(text):
        if t.kind is TokenKind.IDENTIFIER:
            if t.text not in fresh:
                fresh[t.text] = f"r{mapping_seed}_{len(fresh)}"
            out.append(fresh[t.text])
        else:
            out.append(t.text)
    renamed = " ".join(out)
    assert not any(w in KEYWORDS for w in fresh.values())
    return renamed
