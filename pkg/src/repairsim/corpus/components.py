"""Source components (statements and methods) and file segmentation."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Protocol, Sequence

from .lexer import LexError, Token, lex, token_key
from .parser import BraceError, StatementWalker, find_methods, match_brackets, parse_method, parse_statement
from .tree import AstNode


class Role(str, Enum):
    STATEMENT = "statement"
    METHOD = "method"


class SegmentationError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True, eq=False)
class SourceComponent:
    id: str
    role: Role
    file_path: str
    span: tuple[int, int]
    raw_text: str
    tokens: tuple[Token, ...]
    # character offsets of raw_text within the file
    start: int = 0
    end: int = 0
    _ast: AstNode | None = field(default=None, repr=False)

    @cached_property
    def key(self) -> tuple[tuple[str, str], ...]:
        return token_key(self.tokens)

    @property
    def position(self) -> tuple[str, int, int]:
        """Sort key for deterministic tie-breaking: path, then line, then offset."""
        return (self.file_path, self.span[0], self.start)

    @cached_property
    def ast(self) -> AstNode:
        if self._ast is not None:
            return self._ast
        return parse_ast(self)

    def equivalent(self, other: "SourceComponent") -> bool:
        return self.key == other.key

    def contains(self, other: "SourceComponent") -> bool:
        return (
            self.file_path == other.file_path
            and self.start <= other.start
            and other.end <= self.end
        )

    @property
    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]


def parse_ast(component: SourceComponent) -> AstNode:
    """Coarse AST for a component; never fails (``unknown`` absorbs errors)."""
    if component.role is Role.METHOD:
        return parse_method(component.tokens)
    return parse_statement(component.tokens)


def component_id(role: Role, path: str, line: int, column: int) -> str:
    return f"{role.value[0].upper()}:{path}:{line}:{column}"


def make_component(role: Role, path: str, source: str, tokens: Sequence[Token], line_starts: list[int]) -> SourceComponent:
    first, last = tokens[0], tokens[-1]
    start = line_starts[first.line - 1] + first.column - 1
    end = line_starts[last.line - 1] + last.column - 1 + len(last.text)
    end_line = last.line + last.text.count("\n")
    return SourceComponent(
        id=component_id(role, path, first.line, first.column),
        role=role,
        file_path=path,
        span=(first.line, end_line),
        raw_text=source[start:end],
        tokens=tuple(tokens),
        start=start,
        end=end,
    )


def line_offsets(source: str) -> list[int]:
    starts = [0]
    for i, ch in enumerate(source):
        if ch == "\n":
            starts.append(i + 1)
    return starts


@dataclass
class Segmentation:
    methods: list[SourceComponent]
    statements: list[SourceComponent]
    containment: dict[str, str]


class Frontend(Protocol):
    """Language frontend: lexing, segmentation and AST construction."""

    def lex(self, source: str) -> list[Token]: ...

    def segment(self, source: str, path: str) -> Segmentation: ...


class JavaFrontend:
    """Built-in frontend for Java-like curly-brace languages."""

    def lex(self, source: str) -> list[Token]:
        return lex(source)

    def segment(self, source: str, path: str) -> Segmentation:
        try:
            tokens = lex(source)
        except LexError as exc:
            raise SegmentationError(path, exc.line, str(exc).split(": ", 1)[-1]) from exc
        try:
            match = match_brackets(tokens)
        except BraceError as exc:
            raise SegmentationError(path, exc.line, str(exc).split(": ", 1)[-1]) from exc
        starts = line_offsets(source)
        spans = find_methods(tokens, match)
        methods: list[SourceComponent] = []
        statements: dict[tuple[int, int], tuple[SourceComponent, str]] = {}
        # outer methods first; inner methods overwrite, so the innermost wins
        for ms in spans:
            method = make_component(Role.METHOD, path, source, tokens[ms.start : ms.body_close + 1], starts)
            methods.append(method)

            def emit(a: int, b: int, owner: str = method.id) -> None:
                statements[(a, b)] = (
                    make_component(Role.STATEMENT, path, source, tokens[a:b], starts),
                    owner,
                )

            StatementWalker(tokens, match, emit).walk(ms.body_open + 1, ms.body_close)
        ordered = [statements[k] for k in sorted(statements)]
        return Segmentation(
            methods=methods,
            statements=[s for s, _ in ordered],
            containment={s.id: owner for s, owner in ordered},
        )


def segment(source: str, path: str = "<memory>") -> Segmentation:
    return JavaFrontend().segment(source, path)


def statement_from_text(text: str, path: str, line: int) -> SourceComponent | None:
    """Build a free-standing statement component from one line of code.

    Returns None unless the text is exactly one statement (after dropping
    braces and a leading ``else`` that only belong to the block structure).
    """
    from .parser import split_statements

    tokens = strip_structural(lex(text))
    if not tokens:
        return None
    spans = split_statements(tokens)
    if len(spans) != 1 or spans[0] != (0, len(tokens)):
        return None
    shifted = [Token(t.kind, t.text, t.line + line - 1, t.column) for t in tokens]
    starts = line_offsets(text)
    first, last = tokens[0], tokens[-1]
    s = starts[first.line - 1] + first.column - 1
    e = starts[last.line - 1] + last.column - 1 + len(last.text)
    return SourceComponent(
        id=component_id(Role.STATEMENT, path, line, first.column),
        role=Role.STATEMENT,
        file_path=path,
        span=(line, line + text[s:e].count("\n")),
        raw_text=text[s:e],
        tokens=tuple(shifted),
        start=s,
        end=e,
    )


def strip_structural(tokens: Sequence[Token]) -> list[Token]:
    """Drop block braces and a leading ``else`` that surround a statement on its line."""
    toks = list(tokens)
    while toks and toks[0].text == "}" and toks[0].kind.value == "separator":
        toks.pop(0)
    if toks and toks[0].text == "else" and len(toks) > 1:
        toks.pop(0)
    while toks and toks[-1].text == "{" and toks[-1].kind.value == "separator":
        toks.pop()
    return toks
