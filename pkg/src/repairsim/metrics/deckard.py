"""Deckard-style characteristic vectors: AST node-kind counts."""

from __future__ import annotations

import numpy as np

from ..corpus import NODE_KINDS, AstNode, SourceComponent
from .vectors import MetricKind, MetricVector

_INDEX = {k: i for i, k in enumerate(NODE_KINDS)}
N_KINDS = len(NODE_KINDS)


def count_vector(root: AstNode, pairs: bool = False) -> np.ndarray:
    """Occurrences of each node kind, in NODE_KINDS order.

    With ``pairs`` the vector is extended by N_KINDS**2 parent-child kind pair
    counts (height-1 patterns).
    """
    size = N_KINDS + (N_KINDS * N_KINDS if pairs else 0)
    vec = np.zeros(size, dtype=np.int64)
    for n in root.walk():
        vec[_INDEX[n.kind]] += 1
        if pairs:
            for c in n.children:
                vec[N_KINDS + _INDEX[n.kind] * N_KINDS + _INDEX[c.kind]] += 1
    return vec


def deckard_vector(component: SourceComponent, pairs: bool = False) -> MetricVector:
    return MetricVector(MetricKind.DECKARD, count_vector(component.ast, pairs))
