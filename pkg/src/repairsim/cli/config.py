"""Run configuration: a YAML file merged with command-line overrides."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from ..corpus.index import DEFAULT_FILTER
from ..metrics import METHOD_DIMENSION, STATEMENT_DIMENSION, EmbeddingConfig, MetricKind

CACHE_ENV = "REPAIRSIM_CACHE_DIR"
ALL_METRICS = tuple(k.value for k in MetricKind)


class ConfigError(ValueError):
    """Bad or inconsistent configuration (exit code 1)."""


@dataclass(frozen=True)
class EmbeddingSettings:
    statement_dimension: int = STATEMENT_DIMENSION
    method_dimension: int = METHOD_DIMENSION
    window: int = 5
    epochs: int = 20
    negative: int = 5
    min_count: int = 1
    alpha: float = 0.025
    min_alpha: float = 0.0001
    train_words: bool = True

    def config(self, dimension: int, seed: int) -> EmbeddingConfig:
        return EmbeddingConfig(
            dimension=dimension,
            window=self.window,
            epochs=self.epochs,
            negative=self.negative,
            min_count=self.min_count,
            alpha=self.alpha,
            min_alpha=self.min_alpha,
            train_words=self.train_words,
            seed=seed,
        )


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on.

    Paths are stored resolved. ``cache_dir`` defaults to ``<run_dir>/cache``
    and is overridden by the REPAIRSIM_CACHE_DIR environment variable.
    """

    run_dir: Path = Path("run")
    corpus_root: Optional[Path] = None
    file_filter: tuple[str, ...] = DEFAULT_FILTER
    metrics: tuple[str, ...] = ALL_METRICS
    combined: Optional[tuple[str, str]] = ("TFIDF", "TFIDF")
    embedding: EmbeddingSettings = field(default_factory=EmbeddingSettings)
    sample_limit: Optional[int] = None
    sample_seed: Optional[int] = None  # None: use ``seed``
    metric_limits: Mapping[str, int] = field(default_factory=dict)
    deckard_pairs: bool = False
    pessimistic: bool = False
    bins: int = 20
    cache_dir: Optional[Path] = None
    jobs: int = 1
    seed: int = 0

    @property
    def effective_sample_seed(self) -> int:
        return self.seed if self.sample_seed is None else self.sample_seed

    @property
    def effective_cache_dir(self) -> Path:
        env = os.environ.get(CACHE_ENV)
        if env:
            return Path(env)
        return self.cache_dir if self.cache_dir is not None else self.run_dir / "cache"

    def metric_kinds(self) -> list[MetricKind]:
        return [MetricKind(m) for m in self.metrics]

    def to_record(self) -> dict:
        """JSON-friendly form for the manifest; machine-local paths left out."""
        rec = asdict(self)
        for key in ("run_dir", "corpus_root", "cache_dir"):
            rec.pop(key)
        rec["file_filter"] = list(self.file_filter)
        rec["metrics"] = list(self.metrics)
        rec["combined"] = list(self.combined) if self.combined else None
        rec["metric_limits"] = dict(sorted(self.metric_limits.items()))
        return rec


def _metric_list(value: Any) -> tuple[str, ...]:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        names = tuple(MetricKind.parse(str(v)).value for v in value)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not names:
        raise ConfigError("metric set is empty")
    return tuple(dict.fromkeys(names))


def _pair(value: Any) -> Optional[tuple[str, str]]:
    if value in (None, "", "none", False):
        return None
    if isinstance(value, str):
        value = value.split(",")
    try:
        names = [MetricKind.parse(str(v)).value for v in value if str(v).strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if len(names) != 2:
        raise ConfigError(f"combined pair needs two metrics, got {value!r}")
    return names[0], names[1]


def _positive(name: str, value: Any, allow_none: bool = False) -> Optional[int]:
    if value is None and allow_none:
        return None
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {value!r}") from None
    if n < 1:
        raise ConfigError(f"{name} must be positive, got {n}")
    return n


def _path(value: Any, base: Path) -> Optional[Path]:
    if value in (None, ""):
        return None
    p = Path(os.path.expanduser(str(value)))
    return p if p.is_absolute() else base / p


def read_config_file(path: Path) -> dict:
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def build_config(config_file: Optional[Path] = None, **overrides: Any) -> RunConfig:
    """Merge the config file with overrides; ``None`` overrides are ignored.

    Relative paths in the file are taken relative to the file's directory,
    relative paths on the command line relative to the working directory.
    """
    raw: dict = {}
    base = Path.cwd()
    if config_file is not None:
        raw = read_config_file(config_file)
        base = config_file.resolve().parent
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known - {"sample"})
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    # a nested ``sample: {limit, seed}`` block is accepted too
    sample = raw.pop("sample", None) or {}
    if not isinstance(sample, dict):
        raise ConfigError("sample must be a mapping with limit and seed")
    raw.setdefault("sample_limit", sample.get("limit"))
    raw.setdefault("sample_seed", sample.get("seed"))

    cfg = RunConfig()
    values: dict[str, Any] = {}
    for key, value in raw.items():
        if value is None and key not in ("combined",):
            continue
        values[key] = (value, base)
    cwd = Path.cwd()
    for key, value in overrides.items():
        if value is not None:
            values[key] = (value, cwd)

    out: dict[str, Any] = {}
    for key, (value, origin) in values.items():
        if key in ("run_dir", "corpus_root", "cache_dir"):
            out[key] = _path(value, origin)
        elif key == "file_filter":
            out[key] = (value,) if isinstance(value, str) else tuple(str(v) for v in value)
            if not out[key]:
                raise ConfigError("file_filter is empty")
        elif key == "metrics":
            out[key] = _metric_list(value)
        elif key == "combined":
            out[key] = _pair(value)
        elif key == "embedding":
            if isinstance(value, EmbeddingSettings):
                out[key] = value
                continue
            if not isinstance(value, dict):
                raise ConfigError("embedding must be a mapping")
            allowed = {f.name for f in fields(EmbeddingSettings)}
            bad = sorted(set(value) - allowed)
            if bad:
                raise ConfigError(f"unknown embedding keys: {', '.join(bad)}")
            out[key] = replace(cfg.embedding, **value)
        elif key == "metric_limits":
            if not isinstance(value, dict):
                raise ConfigError("metric_limits must map metric names to task counts")
            out[key] = {MetricKind.parse(k).value: _positive(f"metric_limits.{k}", v) for k, v in value.items()}
        elif key in ("sample_limit",):
            out[key] = _positive(key, value, allow_none=True)
        elif key in ("jobs", "bins"):
            out[key] = _positive(key, value)
        elif key in ("seed", "sample_seed"):
            try:
                out[key] = int(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{key} must be an integer, got {value!r}") from None
        elif key in ("deckard_pairs", "pessimistic"):
            out[key] = bool(value)
    cfg = replace(cfg, **out)
    if cfg.bins < 2:
        raise ConfigError("bins must be at least 2")
    if cfg.embedding.statement_dimension < 1 or cfg.embedding.method_dimension < 1:
        raise ConfigError("embedding dimensions must be positive")
    return cfg
