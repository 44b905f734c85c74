"""Coarse AST over a fixed node-kind vocabulary."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator


class NodeKind(str, Enum):
    BLOCK = "block"
    IF = "if"
    LOOP = "loop"
    RETURN = "return"
    THROW = "throw"
    ASSIGNMENT = "assignment"
    DECLARATION = "declaration"
    CALL = "call"
    FIELD_ACCESS = "field-access"
    BINARY_OP = "binary-op"
    UNARY_OP = "unary-op"
    LITERAL = "literal"
    IDENTIFIER = "identifier"
    ARGUMENT_LIST = "argument-list"
    UNKNOWN = "unknown"


# Fixed order used for count vectors.
NODE_KINDS: tuple[NodeKind, ...] = tuple(NodeKind)


@dataclass(frozen=True)
class AstNode:
    kind: NodeKind
    children: tuple["AstNode", ...] = field(default=())

    def walk(self) -> Iterator["AstNode"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def to_sexpr(self) -> str:
        if not self.children:
            return self.kind.value
        inner = ", ".join(c.to_sexpr() for c in self.children)
        return f"{self.kind.value}({inner})"


def node(kind: NodeKind, *children: AstNode) -> AstNode:
    return AstNode(kind, tuple(children))
