"""Tolerant lexer for Java-like curly-brace source code.

Comments and whitespace are dropped. String, text-block and char literals are
kept as single tokens, quotes included. Characters the lexer does not know are
emitted as one-character operator tokens instead of failing, so exotic syntax
degrades gracefully; only unterminated literals and block comments are errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    NUMBER = "number-literal"
    STRING = "string-literal"
    CHAR = "char-literal"
    OPERATOR = "operator"
    SEPARATOR = "separator"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int

    @property
    def key(self) -> tuple[str, str]:
        """Position-free identity used for syntactic equivalence."""
        return (self.kind.value, self.text)


class LexError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null var
    """.split()
)

SEPARATORS = ("...", "::", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@")

# Longest first so maximal munch works with a linear scan.
OPERATORS = (
    ">>>=", "<<=", ">>=", ">>>", "...",
    "->", "==", "<=", ">=", "!=", "&&", "||", "++", "--", "+=", "-=", "*=",
    "/=", "&=", "|=", "^=", "%=", "<<", ">>",
    "=", ">", "<", "!", "~", "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
)

_PUNCT = sorted(
    [(s, TokenKind.SEPARATOR) for s in SEPARATORS if s != "..."]
    + [(s, TokenKind.OPERATOR) for s in OPERATORS if s != "..."]
    + [("...", TokenKind.SEPARATOR)],
    key=lambda p: -len(p[0]),
)


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def peek(self, k: int = 0) -> str:
        i = self.pos + k
        return self.text[i] if i < len(self.text) else ""

    def startswith(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    def advance(self, n: int = 1) -> str:
        chunk = self.text[self.pos : self.pos + n]
        for ch in chunk:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += len(chunk)
        return chunk


def _scan_number(sc: _Scanner) -> str:
    start = sc.pos
    if sc.peek() == "0" and sc.peek(1) in ("x", "X", "b", "B"):
        sc.advance(2)
        while sc.peek() and (sc.peek().isalnum() or sc.peek() == "_"):
            sc.advance()
        return sc.text[start : sc.pos]
    while sc.peek() and (sc.peek().isdigit() or sc.peek() == "_"):
        sc.advance()
    if sc.peek() == "." and sc.peek(1).isdigit():
        sc.advance()
        while sc.peek() and (sc.peek().isdigit() or sc.peek() == "_"):
            sc.advance()
    elif sc.peek() == "." and start != sc.pos and not _is_ident_start(sc.peek(1)):
        # trailing-dot double such as "1." but not "1.foo"
        sc.advance()
    if sc.peek() in ("e", "E") and (
        sc.peek(1).isdigit() or (sc.peek(1) in "+-" and sc.peek(2).isdigit())
    ):
        sc.advance(2)
        while sc.peek().isdigit():
            sc.advance()
    if sc.peek() and sc.peek() in "lLfFdD":
        sc.advance()
    return sc.text[start : sc.pos]


def _scan_quoted(sc: _Scanner, quote: str, what: str) -> str:
    start, line = sc.pos, sc.line
    sc.advance()
    while True:
        ch = sc.peek()
        if ch == "" or ch == "\n":
            raise LexError(f"unterminated {what}", line)
        if ch == "\\":
            sc.advance(2)
            continue
        sc.advance()
        if ch == quote:
            return sc.text[start : sc.pos]


def lex(source: str) -> list[Token]:
    """Split ``source`` into tokens.

    Raises:
        LexError: on an unterminated string, char literal, text block or
            block comment. The error carries the line where it started.
    """
    sc = _Scanner(source)
    tokens: list[Token] = []
    while sc.pos < len(source):
        ch = sc.peek()
        if ch.isspace():
            sc.advance()
            continue
        if sc.startswith("//"):
            while sc.peek() and sc.peek() != "\n":
                sc.advance()
            continue
        if sc.startswith("/*"):
            line = sc.line
            end = source.find("*/", sc.pos + 2)
            if end < 0:
                raise LexError("unterminated block comment", line)
            sc.advance(end + 2 - sc.pos)
            continue
        line, col = sc.line, sc.col
        if sc.startswith('"""'):
            end = source.find('"""', sc.pos + 3)
            if end < 0:
                raise LexError("unterminated text block", line)
            text = sc.advance(end + 3 - sc.pos)
            tokens.append(Token(TokenKind.STRING, text, line, col))
        elif ch == '"':
            tokens.append(Token(TokenKind.STRING, _scan_quoted(sc, '"', "string literal"), line, col))
        elif ch == "'":
            tokens.append(Token(TokenKind.CHAR, _scan_quoted(sc, "'", "char literal"), line, col))
        elif ch.isdigit() or (ch == "." and sc.peek(1).isdigit()):
            tokens.append(Token(TokenKind.NUMBER, _scan_number(sc), line, col))
        elif _is_ident_start(ch):
            start = sc.pos
            while sc.peek() and _is_ident_part(sc.peek()):
                sc.advance()
            word = source[start : sc.pos]
            kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, word, line, col))
        else:
            for text, kind in _PUNCT:
                if sc.startswith(text):
                    sc.advance(len(text))
                    tokens.append(Token(kind, text, line, col))
                    break
            else:
                tokens.append(Token(TokenKind.OPERATOR, sc.advance(), line, col))
    return tokens


def token_key(tokens) -> tuple[tuple[str, str], ...]:
    """Key under which two token sequences are syntactically equivalent."""
    return tuple(t.key for t in tokens)
