from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np


class MetricKind(str, Enum):
    LCS = "LCS"
    TFIDF = "TFIDF"
    DOC2VEC = "DOC2VEC"
    DECKARD = "DECKARD"

    @classmethod
    def parse(cls, name: str) -> "MetricKind":
        try:
            return cls(name.strip().upper())
        except ValueError:
            raise ValueError(f"unknown metric {name!r}; expected one of {[k.value for k in cls]}") from None


Payload = Union[dict, np.ndarray]


@dataclass(frozen=True)
class MetricVector:
    """Per-metric representation of one component.

    ``flagged`` marks a vector that is zero because its input was empty
    (no tokens, or only out-of-vocabulary tokens).
    """

    kind: MetricKind
    payload: Payload
    flagged: bool = False

    def norm(self) -> float:
        if isinstance(self.payload, dict):
            return math.sqrt(sum(w * w for w in self.payload.values()))
        return float(np.linalg.norm(self.payload))

    def scaled(self, c: float) -> "MetricVector":
        if isinstance(self.payload, dict):
            return MetricVector(self.kind, {k: w * c for k, w in self.payload.items()}, self.flagged)
        return MetricVector(self.kind, self.payload * c, self.flagged)


class UndefinedCosine(ValueError):
    def __init__(self, message: str = "undefined cosine"):
        super().__init__(message)


def cosine(u: MetricVector, v: MetricVector) -> float:
    """Cosine similarity of two vectors of the same kind.

    Raises:
        UndefinedCosine: if either vector is zero.
        ValueError: on mismatched kinds or dimensions.
    """
    if u.kind != v.kind:
        raise ValueError(f"cannot compare {u.kind.value} with {v.kind.value} vectors")
    a, b = u.payload, v.payload
    if isinstance(a, dict) and isinstance(b, dict):
        if len(a) > len(b):
            a, b = b, a
        dot = sum(w * b.get(k, 0.0) for k, w in a.items())
    elif isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        if a.shape != b.shape:
            raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
        dot = float(np.dot(a.astype(float), b.astype(float)))
    else:
        raise ValueError("cannot mix sparse and dense payloads")
    nu, nv = u.norm(), v.norm()
    if nu == 0.0 or nv == 0.0:
        raise UndefinedCosine()
    return max(-1.0, min(1.0, dot / (nu * nv)))
