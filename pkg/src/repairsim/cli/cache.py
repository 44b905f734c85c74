"""On-disk cache of similarity score vectors.

One file per (index, model, query, metric, candidate list). Writes go to a
temporary file that is renamed into place, so an interrupted run leaves
either a complete entry or none, and a resumed run picks up where the
previous one stopped.
"""

from __future__ import annotations

import hashlib
import io
import os
import tempfile
import threading
from pathlib import Path
from typing import Sequence

import numpy as np

from ..corpus import SourceComponent
from ..metrics import Metric


def _digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


class ScoreCache:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.npy"

    def get(self, key: str, size: int):
        p = self._path(key)
        try:
            data = p.read_bytes()
            scores = np.load(io.BytesIO(data), allow_pickle=False)
        except (OSError, ValueError, EOFError):
            with self._lock:
                self.misses += 1
            return None
        if scores.shape != (size,):
            with self._lock:
                self.misses += 1
            return None
        with self._lock:
            self.hits += 1
        return scores

    def put(self, key: str, scores: np.ndarray) -> None:
        p = self._path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        buf = io.BytesIO()
        np.save(buf, np.ascontiguousarray(scores, dtype="<f8"), allow_pickle=False)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".npy")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(buf.getvalue())
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class CachingMetric:
    """Wraps a metric so every ``score_many`` call is served from the cache if possible.

    ``fingerprint`` must change whenever the scores could: it combines the
    index digest, the digest of any model the metric uses, and the metric's
    own settings.
    """

    def __init__(self, inner: Metric, cache: ScoreCache, fingerprint: str):
        self.inner = inner
        self.name = inner.name
        self.cache = cache
        self.fingerprint = fingerprint

    def key(self, query: SourceComponent, candidates: Sequence[SourceComponent]) -> str:
        cands = _digest(*(c.id for c in candidates))
        return _digest(self.fingerprint, self.name, query.id, cands)

    def score_many(self, query: SourceComponent, candidates: Sequence[SourceComponent]) -> np.ndarray:
        key = self.key(query, candidates)
        hit = self.cache.get(key, len(candidates))
        if hit is not None:
            return hit
        scores = np.asarray(self.inner.score_many(query, candidates), dtype=float)
        self.cache.put(key, scores)
        return scores


def fingerprint(*parts: str) -> str:
    return _digest(*parts)
