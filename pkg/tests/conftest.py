import time
from dataclasses import dataclass
from pathlib import Path

import pytest

from repairsim.corpus import CorpusIndex, build_index, statement_from_text
from repairsim.fixtures import combined, planted
from repairsim.metrics import EmbeddingConfig, EmbeddingModel, MetricContext, MetricKind, embed_train
from repairsim.tasks import extract_tasks, parse_diff

EMBEDDING_SEED = 7


def stmt(text: str, path: str = "T.java", line: int = 1):
    c = statement_from_text(text, path, line)
    assert c is not None, f"not a statement: {text!r}"
    return c


def write_tree(root: Path, files: dict) -> Path:
    for rel, text in files.items():
        p = root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    return root


@dataclass
class FixtureRun:
    index: CorpusIndex
    tasks: list
    rejections: list
    context: MetricContext
    metrics: dict
    seconds: float
    statement_model: EmbeddingModel = None
    method_model: EmbeddingModel = None


def _prepare(fx, root: Path, name: str, train: bool) -> FixtureRun:
    start = time.perf_counter()
    app, diffs = fx.write(root)
    index = build_index(app)
    tasks, rejections = [], []
    for p in sorted(diffs.glob("*.diff")):
        t, r = extract_tasks(parse_diff(p.read_text()), index, name, p.stem)
        tasks += t
        rejections += r
    st = me = None
    if train:
        cfg = EmbeddingConfig(seed=EMBEDDING_SEED)
        st = embed_train(index.statements, cfg.with_dimension(128))
        me = embed_train(index.methods, cfg.with_dimension(300))
    context = MetricContext(index, st, me)
    kinds = list(MetricKind) if train else [MetricKind.LCS, MetricKind.TFIDF, MetricKind.DECKARD]
    metrics = {k.value: context.metric(k) for k in kinds}
    return FixtureRun(index, tasks, rejections, context, metrics, time.perf_counter() - start, st, me)


@pytest.fixture(scope="session")
def planted_run(tmp_path_factory) -> FixtureRun:
    return _prepare(planted(), tmp_path_factory.mktemp("planted"), "planted", train=True)


@pytest.fixture(scope="session")
def combined_run(tmp_path_factory) -> FixtureRun:
    return _prepare(combined(), tmp_path_factory.mktemp("combined"), "combined", train=False)


# --- acceptance reporting ---------------------------------------------------

ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE.append((number, title, ok, detail))
    print(f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
