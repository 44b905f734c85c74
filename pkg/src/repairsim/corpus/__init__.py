from .components import (
    Frontend,
    JavaFrontend,
    Role,
    Segmentation,
    SegmentationError,
    SourceComponent,
    parse_ast,
    segment,
    statement_from_text,
)
from .index import CorpusError, CorpusIndex, Diagnostic, build_index
from .lexer import KEYWORDS, LexError, Token, TokenKind, lex, token_key
from .tree import NODE_KINDS, AstNode, NodeKind

__all__ = [
    "AstNode",
    "CorpusError",
    "CorpusIndex",
    "Diagnostic",
    "Frontend",
    "JavaFrontend",
    "KEYWORDS",
    "LexError",
    "NODE_KINDS",
    "NodeKind",
    "Role",
    "Segmentation",
    "SegmentationError",
    "SourceComponent",
    "Token",
    "TokenKind",
    "build_index",
    "lex",
    "parse_ast",
    "segment",
    "statement_from_text",
    "token_key",
]
