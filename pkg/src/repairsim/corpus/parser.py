"""Heuristic statement and expression parsing over token lists.

This is not a Java grammar. Methods are found with brace matching plus a
signature heuristic, statements are delimited by token structure, and
expressions go through a small precedence-climbing parser. Anything the
parser does not understand becomes an ``unknown`` node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .lexer import Token, TokenKind
from .tree import AstNode, NodeKind, node

OPEN_CLOSE = {"(": ")", "[": "]", "{": "}"}

HEADER_KEYWORDS = frozenset({"if", "while", "for", "switch", "synchronized"})
PRIMITIVES = frozenset(
    {"int", "long", "short", "byte", "char", "boolean", "float", "double", "void", "var"}
)
MODIFIERS = frozenset(
    {
        "public", "protected", "private", "static", "final", "abstract", "native",
        "synchronized", "transient", "volatile", "strictfp", "default",
    }
)
ASSIGN_OPS = frozenset({"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="})
BINARY_PREC = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5, "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "instanceof": 7,
    "<<": 8, ">>": 8, ">>>": 8, "+": 9, "-": 9, "*": 10, "/": 10, "%": 10,
}
PREFIX_OPS = frozenset({"!", "~", "-", "+", "++", "--"})
LITERAL_KEYWORDS = frozenset({"true", "false", "null"})


class BraceError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _is(tok: Optional[Token], text: str) -> bool:
    return tok is not None and tok.text == text and tok.kind in (
        TokenKind.SEPARATOR,
        TokenKind.OPERATOR,
        TokenKind.KEYWORD,
    )


def match_brackets(tokens: Sequence[Token], strict_braces: bool = True) -> dict[int, int]:
    """Map each opening bracket index to its closing index (and back).

    Braces must balance when ``strict_braces`` is set; parentheses and square
    brackets are matched tolerantly and unmatched ones are left out.
    """
    match: dict[int, int] = {}
    braces: list[int] = []
    others: list[int] = []
    for i, tok in enumerate(tokens):
        if tok.kind is not TokenKind.SEPARATOR:
            continue
        t = tok.text
        if t == "{":
            braces.append(i)
        elif t == "}":
            if not braces:
                if strict_braces:
                    raise BraceError("unbalanced '}'", tok.line)
                continue
            j = braces.pop()
            match[i], match[j] = j, i
            # parens left open inside the block are abandoned
            while others and others[-1] > j:
                others.pop()
        elif t in "([":
            others.append(i)
        elif t in ")]":
            want = "(" if t == ")" else "["
            # tolerate stray closers: pop only a matching opener
            if others and tokens[others[-1]].text == want:
                j = others.pop()
                match[i], match[j] = j, i
    if braces and strict_braces:
        raise BraceError("unclosed '{'", tokens[braces[-1]].line)
    return match


# ---------------------------------------------------------------------------
# method discovery


@dataclass(frozen=True)
class MethodSpan:
    start: int  # first signature token
    name: int  # index of the name identifier
    body_open: int
    body_close: int


_SIGNATURE_PREV_TEXT = frozenset({">", "]", "}", ";", "{", ")"})


def find_methods(tokens: Sequence[Token], match: dict[int, int]) -> list[MethodSpan]:
    """Every brace-matched method or constructor body, in source order."""
    found = []
    for i, tok in enumerate(tokens):
        if not (tok.kind is TokenKind.SEPARATOR and tok.text == "{"):
            continue
        j = i - 1
        k = j
        while k >= 0 and (
            tokens[k].kind is TokenKind.IDENTIFIER or tokens[k].text in (".", ",", "<", ">", "?")
        ):
            k -= 1
        if k >= 0 and _is(tokens[k], "throws"):
            j = k - 1
        if j < 0 or not _is(tokens[j], ")") or j not in match:
            continue
        name = match[j] - 1
        if name < 0 or tokens[name].kind is not TokenKind.IDENTIFIER:
            continue
        if name > 0:
            prev = tokens[name - 1]
            if prev.kind is TokenKind.IDENTIFIER:
                if prev.text == "record":
                    continue
            elif prev.kind is TokenKind.KEYWORD:
                if prev.text not in MODIFIERS and prev.text not in PRIMITIVES:
                    continue
            elif prev.text not in _SIGNATURE_PREV_TEXT:
                continue
        start = name - 1
        while start >= 0 and tokens[start].text not in (";", "{", "}"):
            if _is(tokens[start], ")") and start in match:
                start = match[start]
            start -= 1
        found.append(MethodSpan(start + 1, name, i, match[i]))
    return found


# ---------------------------------------------------------------------------
# statement walking

EmitFn = Callable[[int, int], None]


class _ParseFail(Exception):
    pass


class StatementWalker:
    """Walks a block's tokens, reporting statement spans and building the AST.

    ``emit(start, stop)`` is called with the half-open token range of each
    statement: simple statements (semicolon-terminated, possibly spanning
    several lines) and control-flow headers such as ``if (x)``.
    """

    def __init__(self, tokens: Sequence[Token], match: dict[int, int], emit: Optional[EmitFn] = None):
        self.toks = tokens
        self.match = match
        self.emit = emit or (lambda a, b: None)

    def tok(self, i: int) -> Optional[Token]:
        return self.toks[i] if 0 <= i < len(self.toks) else None

    def walk(self, i: int, end: int) -> list[AstNode]:
        out = []
        while i < end:
            nxt, n = self.statement(i, end)
            if n is not None:
                out.append(n)
            i = max(nxt, i + 1)
        return out

    def _block_or_statement(self, i: int, end: int) -> tuple[int, Optional[AstNode]]:
        if i >= end:
            return i, None
        return self.statement(i, end)

    def statement(self, i: int, end: int) -> tuple[int, Optional[AstNode]]:
        t = self.toks[i]
        nxt = self.tok(i + 1)
        if _is(t, "{"):
            close = self.match.get(i, end - 1)
            return close + 1, node(NodeKind.BLOCK, *self.walk(i + 1, close))
        if _is(t, ";") or _is(t, "}"):
            return i + 1, None
        if t.kind is TokenKind.KEYWORD:
            kw = t.text
            if kw in HEADER_KEYWORDS and _is(nxt, "(") and (i + 1) in self.match:
                return self._header_statement(i, end)
            if kw == "do":
                j, body = self._block_or_statement(i + 1, end)
                cond: list[AstNode] = []
                if _is(self.tok(j), "while") and _is(self.tok(j + 1), "(") and (j + 1) in self.match:
                    close = self.match[j + 1]
                    stop = close + 2 if _is(self.tok(close + 1), ";") else close + 1
                    self.emit(j, stop)
                    cond = [parse_header(self.toks[j:stop])]
                    j = stop
                children = [c for c in [body] if c is not None] + cond
                return j, node(NodeKind.LOOP, *children)
            if kw == "try":
                return self._try_statement(i, end)
            if kw == "else":
                return i + 1, None
            if kw in ("case", "default") and not _is(nxt, "("):
                j = i + 1
                while j < end and not (_is(self.toks[j], ":") or _is(self.toks[j], "->")):
                    j = self.match.get(j, j) + 1 if self.toks[j].text in OPEN_CLOSE else j + 1
                return j + 1, None
            if kw in ("class", "interface", "enum"):
                return self._skip_type_declaration(i, end)
        if t.kind is TokenKind.IDENTIFIER:
            if _is(nxt, ":"):
                return i + 2, None
            if t.text == "record" and nxt is not None and nxt.kind is TokenKind.IDENTIFIER:
                return self._skip_type_declaration(i, end)
        if _is(t, "@") and _is(nxt, "interface"):
            return self._skip_type_declaration(i, end)
        return self._simple_statement(i, end)

    def _skip_type_declaration(self, i: int, end: int) -> tuple[int, None]:
        j = i
        while j < end and not _is(self.toks[j], "{"):
            j += 1
        if j >= end:
            return end, None
        j = self.match.get(j, end - 1) + 1
        if j < end and _is(self.toks[j], ";"):
            j += 1
        return j, None

    def _simple_statement(self, i: int, end: int) -> tuple[int, AstNode]:
        j = i
        while j < end:
            t = self.toks[j]
            if t.kind is TokenKind.SEPARATOR:
                if t.text == ";":
                    j += 1
                    break
                if t.text in OPEN_CLOSE and j in self.match:
                    j = self.match[j] + 1
                    continue
                if t.text == "}":
                    # stray closer inside the range: stop before it
                    break
            j += 1
        if j == i:
            j = i + 1
        self.emit(i, j)
        return j, parse_simple_statement(self.toks[i:j])

    def _header_statement(self, i: int, end: int) -> tuple[int, AstNode]:
        kw = self.toks[i].text
        close = self.match[i + 1]
        self.emit(i, close + 1)
        header = parse_header(self.toks[i : close + 1])
        j, body = self._block_or_statement(close + 1, end)
        children = list(header.children)
        if body is not None:
            children.append(body)
        if kw == "if" and j < end and _is(self.toks[j], "else"):
            j, alt = self._block_or_statement(j + 1, end)
            if alt is not None:
                children.append(alt)
        return j, AstNode(header.kind, tuple(children))

    def _try_statement(self, i: int, end: int) -> tuple[int, AstNode]:
        children: list[AstNode] = []
        j = i + 1
        if _is(self.tok(j), "(") and j in self.match:
            close = self.match[j]
            self.emit(i, close + 1)
            children.extend(parse_header(self.toks[i : close + 1]).children)
            j = close + 1
        if _is(self.tok(j), "{"):
            j, body = self.statement(j, end)
            children.append(body)
        while _is(self.tok(j), "catch") and _is(self.tok(j + 1), "(") and (j + 1) in self.match:
            close = self.match[j + 1]
            self.emit(j, close + 1)
            clause = list(parse_header(self.toks[j : close + 1]).children)
            j, body = self._block_or_statement(close + 1, end)
            if body is not None:
                clause.append(body)
            children.append(node(NodeKind.BLOCK, *clause))
        if _is(self.tok(j), "finally"):
            j, body = self._block_or_statement(j + 1, end)
            if body is not None:
                children.append(body)
        return j, node(NodeKind.BLOCK, *children)


def split_statements(tokens: Sequence[Token]) -> list[tuple[int, int]]:
    """Statement spans of a bare token sequence, as if it were a block body."""
    match = match_brackets(tokens, strict_braces=False)
    spans: list[tuple[int, int]] = []
    StatementWalker(tokens, match, lambda a, b: spans.append((a, b))).walk(0, len(tokens))
    return spans


# ---------------------------------------------------------------------------
# AST construction


def is_header(tokens: Sequence[Token]) -> bool:
    if len(tokens) < 3 or tokens[0].kind is not TokenKind.KEYWORD:
        return False
    kw = tokens[0].text
    if kw in HEADER_KEYWORDS or kw in ("catch", "try"):
        return _is(tokens[1], "(") and _is(tokens[-1], ")")
    if kw == "while":  # do-while tail
        return _is(tokens[1], "(")
    return False


def parse_statement(tokens: Sequence[Token]) -> AstNode:
    """AST of a single statement component (simple statement or header)."""
    if not tokens:
        return node(NodeKind.UNKNOWN)
    if is_header(tokens):
        return parse_header(tokens)
    return parse_simple_statement(tokens)


def parse_header(tokens: Sequence[Token]) -> AstNode:
    """AST for ``kw ( ... )``; the body is attached by the caller."""
    kw = tokens[0].text
    close = len(tokens) - 1
    while close > 0 and not _is(tokens[close], ")"):
        close -= 1
    inner = list(tokens[2:close])
    try:
        if kw == "if" or kw == "switch":
            return node(NodeKind.IF, _parse_full_expression(inner))
        if kw == "while":
            return node(NodeKind.LOOP, _parse_full_expression(inner))
        if kw == "synchronized":
            return node(NodeKind.BLOCK, _parse_full_expression(inner))
        if kw == "for":
            return node(NodeKind.LOOP, *_parse_for_control(inner))
        if kw == "catch":
            names = [t for t in inner if t.kind is TokenKind.IDENTIFIER]
            return node(NodeKind.DECLARATION, node(NodeKind.IDENTIFIER)) if names else node(NodeKind.DECLARATION)
        if kw == "try":
            parts = _split_top_level(inner, ";")
            return node(NodeKind.BLOCK, *(parse_simple_statement(p) for p in parts if p))
    except _ParseFail:
        pass
    return node(NodeKind.UNKNOWN)


def _split_top_level(tokens: Sequence[Token], sep: str) -> list[list[Token]]:
    parts: list[list[Token]] = [[]]
    depth = 0
    for t in tokens:
        if t.kind is TokenKind.SEPARATOR and t.text in "([{":
            depth += 1
        elif t.kind is TokenKind.SEPARATOR and t.text in ")]}":
            depth -= 1
        if depth == 0 and t.text == sep and t.kind is not TokenKind.STRING:
            parts.append([])
        else:
            parts[-1].append(t)
    return parts


def _parse_for_control(inner: list[Token]) -> list[AstNode]:
    parts = _split_top_level(inner, ";")
    if len(parts) == 1:
        # enhanced for: Type name : expr
        pieces = _split_top_level(inner, ":")
        if len(pieces) != 2:
            raise _ParseFail
        decl = node(NodeKind.DECLARATION, node(NodeKind.IDENTIFIER))
        return [decl, _parse_full_expression(pieces[1])]
    if len(parts) != 3:
        raise _ParseFail
    out: list[AstNode] = []
    if parts[0]:
        out.append(parse_simple_statement(parts[0]))
    if parts[1]:
        out.append(_parse_full_expression(parts[1]))
    for upd in _split_top_level(parts[2], ","):
        if upd:
            out.append(_parse_full_expression(upd))
    return out


def parse_simple_statement(tokens: Sequence[Token]) -> AstNode:
    toks = list(tokens)
    while toks and _is(toks[-1], ";"):
        toks.pop()
    if not toks:
        return node(NodeKind.UNKNOWN)
    try:
        first = toks[0]
        if _is(first, "return"):
            if len(toks) == 1:
                return node(NodeKind.RETURN)
            return node(NodeKind.RETURN, _parse_full_expression(toks[1:]))
        if _is(first, "throw"):
            return node(NodeKind.THROW, _parse_full_expression(toks[1:]))
        if _is(first, "break") or _is(first, "continue"):
            if len(toks) > 2:
                raise _ParseFail
            return node(NodeKind.UNKNOWN)
        if _is(first, "assert"):
            cond = _split_top_level(toks[1:], ":")[0]
            return node(NodeKind.UNKNOWN, _parse_full_expression(cond))
        decl = _try_declaration(toks)
        if decl is not None:
            return decl
        return _parse_full_expression(toks)
    except _ParseFail:
        return node(NodeKind.UNKNOWN)


def _try_declaration(toks: list[Token]) -> Optional[AstNode]:
    p = _ExprParser(toks)
    while True:
        t = p.peek()
        if t is not None and t.kind is TokenKind.KEYWORD and t.text in MODIFIERS:
            p.pos += 1
        elif _is(t, "@") and p.peek(1) is not None and p.peek(1).kind is TokenKind.IDENTIFIER:
            p.pos += 2
            while _is(p.peek(), ".") and p.peek(1) is not None:
                p.pos += 2
            if _is(p.peek(), "("):
                p.skip_balanced()
        else:
            break
    if not p.skip_type():
        return None
    name = p.peek()
    if name is None or name.kind is not TokenKind.IDENTIFIER:
        return None
    after = p.peek(1)
    if not (after is None or after.text in ("=", ",", "[", ":", ";")):
        return None
    children: list[AstNode] = []
    while True:
        tok = p.next()
        if tok is None or tok.kind is not TokenKind.IDENTIFIER:
            raise _ParseFail
        children.append(node(NodeKind.IDENTIFIER))
        while _is(p.peek(), "[") and _is(p.peek(1), "]"):
            p.pos += 2
        if _is(p.peek(), "="):
            p.pos += 1
            children.append(p.expression())
        if _is(p.peek(), ","):
            p.pos += 1
            continue
        break
    if p.peek() is not None:
        raise _ParseFail
    return node(NodeKind.DECLARATION, *children)


def _parse_full_expression(tokens: Sequence[Token]) -> AstNode:
    p = _ExprParser(list(tokens))
    if not tokens:
        raise _ParseFail
    e = p.expression()
    if p.peek() is not None:
        raise _ParseFail
    return e


class _ExprParser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self, k: int = 0) -> Optional[Token]:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else None

    def next(self) -> Optional[Token]:
        t = self.peek()
        if t is not None:
            self.pos += 1
        return t

    def expect(self, text: str) -> None:
        t = self.next()
        if t is None or t.text != text or t.kind is TokenKind.STRING:
            raise _ParseFail

    def skip_balanced(self) -> None:
        """Skip from an opening bracket to just past its partner."""
        depth = 0
        while True:
            t = self.next()
            if t is None:
                raise _ParseFail
            if t.kind is TokenKind.SEPARATOR and t.text in "([{":
                depth += 1
            elif t.kind is TokenKind.SEPARATOR and t.text in ")]}":
                depth -= 1
                if depth == 0:
                    return

    def skip_type_args(self) -> bool:
        if not _is(self.peek(), "<"):
            return True
        depth = 0
        while True:
            t = self.next()
            if t is None:
                return False
            if t.text == "<":
                depth += 1
            elif t.text in (">", ">>", ">>>"):
                depth -= len(t.text)
                if depth <= 0:
                    return depth == 0
            elif not (
                t.kind in (TokenKind.IDENTIFIER,)
                or t.text in (",", ".", "?", "&", "[", "]", "extends", "super", "@")
                or t.text in PRIMITIVES
            ):
                return False

    def skip_type(self) -> bool:
        start = self.pos
        t = self.peek()
        if t is None:
            return False
        if t.kind is TokenKind.KEYWORD and t.text in PRIMITIVES:
            self.pos += 1
        elif t.kind is TokenKind.IDENTIFIER:
            self.pos += 1
            if not self.skip_type_args():
                self.pos = start
                return False
            while _is(self.peek(), ".") and self.peek(1) is not None and self.peek(1).kind is TokenKind.IDENTIFIER:
                self.pos += 2
                if not self.skip_type_args():
                    self.pos = start
                    return False
        else:
            return False
        while _is(self.peek(), "[") and _is(self.peek(1), "]"):
            self.pos += 2
        if _is(self.peek(), "..."):
            self.pos += 1
        return True

    # precedence climbing -------------------------------------------------

    def expression(self) -> AstNode:
        if self._at_lambda():
            return self._lambda()
        lhs = self.ternary()
        t = self.peek()
        if t is not None and t.kind is TokenKind.OPERATOR and t.text in ASSIGN_OPS:
            self.pos += 1
            return node(NodeKind.ASSIGNMENT, lhs, self.expression())
        return lhs

    def ternary(self) -> AstNode:
        cond = self.binary(1)
        if _is(self.peek(), "?"):
            self.pos += 1
            a = self.expression()
            self.expect(":")
            b = self._lambda() if self._at_lambda() else self.ternary()
            return node(NodeKind.BINARY_OP, cond, a, b)
        return cond

    def binary(self, min_prec: int) -> AstNode:
        lhs = self.unary()
        while True:
            t = self.peek()
            if t is None or t.kind not in (TokenKind.OPERATOR, TokenKind.KEYWORD):
                return lhs
            prec = BINARY_PREC.get(t.text)
            if prec is None or prec < min_prec:
                return lhs
            self.pos += 1
            if t.text == "instanceof":
                if _is(self.peek(), "final"):
                    self.pos += 1
                if not self.skip_type():
                    raise _ParseFail
                binding = self.peek()
                if binding is not None and binding.kind is TokenKind.IDENTIFIER:
                    self.pos += 1
                    lhs = node(NodeKind.BINARY_OP, lhs, node(NodeKind.IDENTIFIER))
                else:
                    lhs = node(NodeKind.BINARY_OP, lhs)
                continue
            rhs = self.binary(prec + 1)
            lhs = node(NodeKind.BINARY_OP, lhs, rhs)

    def unary(self) -> AstNode:
        t = self.peek()
        if t is None:
            raise _ParseFail
        if t.kind is TokenKind.OPERATOR and t.text in PREFIX_OPS:
            self.pos += 1
            return node(NodeKind.UNARY_OP, self.unary())
        if _is(t, "(") and self._at_cast():
            return node(NodeKind.UNARY_OP, self.unary())
        return self.postfix(self.primary())

    def _at_cast(self) -> bool:
        start = self.pos
        self.pos += 1
        ok = self.skip_type()
        while ok and _is(self.peek(), "&"):
            self.pos += 1
            ok = self.skip_type()
        if ok and _is(self.peek(), ")"):
            inner_primitive = self.toks[start + 1].text in PRIMITIVES
            self.pos += 1
            nxt = self.peek()
            if nxt is not None and (
                nxt.kind in (TokenKind.IDENTIFIER, TokenKind.NUMBER, TokenKind.STRING, TokenKind.CHAR)
                or nxt.text in ("(", "!", "~", "this", "new", "super", "true", "false", "null")
                or (inner_primitive and nxt.text in ("-", "+", "++", "--"))
            ):
                return True
        self.pos = start
        return False

    def _at_lambda(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t.kind is TokenKind.IDENTIFIER and _is(self.peek(1), "->"):
            return True
        if _is(t, "("):
            start = self.pos
            try:
                self.skip_balanced()
                return _is(self.peek(), "->")
            except _ParseFail:
                return False
            finally:
                self.pos = start
        return False

    def _lambda(self) -> AstNode:
        if _is(self.peek(), "("):
            self.skip_balanced()
        else:
            self.pos += 1
        self.expect("->")
        if _is(self.peek(), "{"):
            self.skip_balanced()
            return node(NodeKind.UNKNOWN)
        return node(NodeKind.UNKNOWN, self.expression())

    def arguments(self) -> AstNode:
        self.expect("(")
        args: list[AstNode] = []
        if _is(self.peek(), ")"):
            self.pos += 1
            return node(NodeKind.ARGUMENT_LIST)
        while True:
            args.append(self.expression())
            t = self.next()
            if t is None:
                raise _ParseFail
            if t.text == ")":
                return node(NodeKind.ARGUMENT_LIST, *args)
            if t.text != ",":
                raise _ParseFail

    def _array_initializer(self) -> AstNode:
        self.expect("{")
        items: list[AstNode] = []
        while not _is(self.peek(), "}"):
            if _is(self.peek(), "{"):
                items.append(self._array_initializer())
            else:
                items.append(self.expression())
            if _is(self.peek(), ","):
                self.pos += 1
            elif not _is(self.peek(), "}"):
                raise _ParseFail
        self.pos += 1
        return node(NodeKind.ARGUMENT_LIST, *items)

    def primary(self) -> AstNode:
        t = self.next()
        if t is None:
            raise _ParseFail
        if t.kind in (TokenKind.NUMBER, TokenKind.STRING, TokenKind.CHAR):
            return node(NodeKind.LITERAL)
        if t.kind is TokenKind.KEYWORD and t.text in LITERAL_KEYWORDS:
            return node(NodeKind.LITERAL)
        if t.kind is TokenKind.IDENTIFIER or _is(t, "this") or _is(t, "super"):
            ident = node(NodeKind.IDENTIFIER)
            if _is(self.peek(), "("):
                return node(NodeKind.CALL, ident, self.arguments())
            return ident
        if t.kind is TokenKind.KEYWORD and t.text in PRIMITIVES:
            # int.class, int[]::new
            while _is(self.peek(), "[") and _is(self.peek(1), "]"):
                self.pos += 2
            return node(NodeKind.IDENTIFIER)
        if _is(t, "("):
            inner = self.expression()
            self.expect(")")
            return inner
        if _is(t, "{"):
            self.pos -= 1
            return self._array_initializer()
        if _is(t, "new"):
            return self._creation()
        if _is(t, "switch"):
            if not _is(self.peek(), "("):
                raise _ParseFail
            self.skip_balanced()
            if not _is(self.peek(), "{"):
                raise _ParseFail
            self.skip_balanced()
            return node(NodeKind.UNKNOWN)
        raise _ParseFail

    def _creation(self) -> AstNode:
        if not self.skip_type_without_dims():
            raise _ParseFail
        if _is(self.peek(), "("):
            args = self.arguments()
            if _is(self.peek(), "{"):
                self.skip_balanced()  # anonymous class body
            return node(NodeKind.CALL, args)
        dims: list[AstNode] = []
        while _is(self.peek(), "["):
            self.pos += 1
            if _is(self.peek(), "]"):
                self.pos += 1
                continue
            dims.append(self.expression())
            self.expect("]")
        if _is(self.peek(), "{"):
            return node(NodeKind.CALL, self._array_initializer())
        if not dims:
            raise _ParseFail
        return node(NodeKind.CALL, node(NodeKind.ARGUMENT_LIST, *dims))

    def skip_type_without_dims(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t.kind is TokenKind.KEYWORD and t.text in PRIMITIVES:
            self.pos += 1
            return True
        if t.kind is not TokenKind.IDENTIFIER:
            return False
        self.pos += 1
        if not self.skip_type_args():
            return False
        while _is(self.peek(), ".") and self.peek(1) is not None and self.peek(1).kind is TokenKind.IDENTIFIER:
            self.pos += 2
            if not self.skip_type_args():
                return False
        # diamond and explicit type args already consumed
        return True

    def postfix(self, e: AstNode) -> AstNode:
        while True:
            t = self.peek()
            if _is(t, "."):
                self.pos += 1
                if _is(self.peek(), "<"):
                    if not self.skip_type_args():
                        raise _ParseFail
                name = self.next()
                if name is None:
                    raise _ParseFail
                if name.kind is not TokenKind.IDENTIFIER and name.text not in ("class", "this", "super", "new"):
                    raise _ParseFail
                if name.text == "new":
                    inner = self._creation()
                    e = node(NodeKind.FIELD_ACCESS, e, inner)
                    continue
                access = node(NodeKind.FIELD_ACCESS, e, node(NodeKind.IDENTIFIER))
                if _is(self.peek(), "("):
                    e = node(NodeKind.CALL, access, self.arguments())
                else:
                    e = access
            elif _is(t, "::"):
                self.pos += 1
                name = self.next()
                if name is None or not (name.kind is TokenKind.IDENTIFIER or name.text == "new"):
                    raise _ParseFail
                e = node(NodeKind.FIELD_ACCESS, e, node(NodeKind.IDENTIFIER))
            elif _is(t, "["):
                self.pos += 1
                idx = self.expression()
                self.expect("]")
                e = node(NodeKind.BINARY_OP, e, idx)
            elif t is not None and t.kind is TokenKind.OPERATOR and t.text in ("++", "--"):
                self.pos += 1
                e = node(NodeKind.UNARY_OP, e)
            elif _is(t, "<") and e.kind is NodeKind.IDENTIFIER and self._generic_method_ref():
                continue
            else:
                return e

    def _generic_method_ref(self) -> bool:
        # List<String>::new
        start = self.pos
        if self.skip_type_args() and _is(self.peek(), "::"):
            return True
        self.pos = start
        return False


def parse_method(tokens: Sequence[Token]) -> AstNode:
    """AST of a method component: declaration(name, block(body...))."""
    match = match_brackets(tokens, strict_braces=False)
    body_open = None
    for i, t in enumerate(tokens):
        if _is(t, "(") and i in match:
            j = match[i] + 1
            while j < len(tokens) and not _is(tokens[j], "{"):
                j += 1
            body_open = j if j < len(tokens) else None
            break
    if body_open is None or body_open not in match:
        return node(NodeKind.UNKNOWN)
    body = StatementWalker(tokens, match).walk(body_open + 1, match[body_open])
    return node(NodeKind.DECLARATION, node(NodeKind.IDENTIFIER), node(NodeKind.BLOCK, *body))
