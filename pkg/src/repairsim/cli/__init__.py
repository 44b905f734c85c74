from .cache import CachingMetric, ScoreCache
from .config import CACHE_ENV, ConfigError, EmbeddingSettings, RunConfig, build_config
from .main import DataError, Prerequisite, cli, main, run

__all__ = [
    "CACHE_ENV",
    "CachingMetric",
    "ConfigError",
    "DataError",
    "EmbeddingSettings",
    "Prerequisite",
    "RunConfig",
    "ScoreCache",
    "build_config",
    "cli",
    "main",
    "run",
]
