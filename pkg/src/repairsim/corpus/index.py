"""Immutable, queryable store of the components of one application."""

from __future__ import annotations

import hashlib
import json
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .components import JavaFrontend, Role, SegmentationError, Segmentation, SourceComponent
from .lexer import Token, TokenKind

log = logging.getLogger(__name__)

INDEX_FORMAT = "repairsim-index"
INDEX_VERSION = 1
DEFAULT_FILTER = ("**/*.java",)


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    path: str
    message: str


class CorpusIndex:
    """All components of an application plus the two candidate pools.

    The statement pool holds every statement found inside a method body; the
    context pool holds every brace-matched method body, inner and anonymous
    class methods included.
    """

    def __init__(
        self,
        components: Sequence[SourceComponent],
        containment: Mapping[str, str],
        files: Sequence[str],
        diagnostics: Sequence[Diagnostic] = (),
    ):
        self._components = {c.id: c for c in components}
        if len(self._components) != len(components):
            raise CorpusError("duplicate component ids")
        self.statements: tuple[SourceComponent, ...] = tuple(
            c for c in components if c.role is Role.STATEMENT
        )
        self.methods: tuple[SourceComponent, ...] = tuple(c for c in components if c.role is Role.METHOD)
        self.containment: Mapping[str, str] = MappingProxyType(dict(containment))
        self.files: tuple[str, ...] = tuple(files)
        self.diagnostics: tuple[Diagnostic, ...] = tuple(diagnostics)
        missing = [s.id for s in self.statements if s.id not in self.containment]
        if missing:
            raise CorpusError(f"statements without an enclosing context: {missing[:3]}")
        by_method: dict[str, list[SourceComponent]] = defaultdict(list)
        for s in self.statements:
            by_method[self.containment[s.id]].append(s)
        self._by_method = {k: tuple(v) for k, v in by_method.items()}
        by_key: dict[tuple, list[SourceComponent]] = defaultdict(list)
        for s in self.statements:
            by_key[s.key].append(s)
        self._by_key = {k: tuple(v) for k, v in by_key.items()}
        self._by_file: dict[str, list[SourceComponent]] = defaultdict(list)
        for c in components:
            self._by_file[c.file_path].append(c)

    def __len__(self) -> int:
        return len(self._components)

    def __iter__(self):
        return iter(self._components.values())

    def __getitem__(self, component_id: str) -> SourceComponent:
        return self._components[component_id]

    def get(self, component_id: str) -> SourceComponent | None:
        return self._components.get(component_id)

    def enclosing(self, statement: SourceComponent) -> SourceComponent:
        return self._components[self.containment[statement.id]]

    def statements_of(self, method: SourceComponent) -> tuple[SourceComponent, ...]:
        """Statements whose innermost enclosing method is ``method``."""
        return self._by_method.get(method.id, ())

    def statements_within(self, method: SourceComponent) -> list[SourceComponent]:
        """Statements textually inside ``method``, nested methods included."""
        return [s for s in self._by_file.get(method.file_path, ()) if s.role is Role.STATEMENT and method.contains(s)]

    def equivalents(self, component: SourceComponent) -> tuple[SourceComponent, ...]:
        """Pooled statements syntactically equivalent to ``component``."""
        return self._by_key.get(component.key, ())

    def in_file(self, path: str) -> list[SourceComponent]:
        return list(self._by_file.get(path, ()))

    def summary(self) -> dict[str, int]:
        return {
            "files": len(self.files),
            "methods": len(self.methods),
            "statements": len(self.statements),
            "diagnostics": len(self.diagnostics),
        }

    # persistence ---------------------------------------------------------

    def to_lines(self) -> list[str]:
        header = {
            "format": INDEX_FORMAT,
            "version": INDEX_VERSION,
            "files": list(self.files),
            "diagnostics": [[d.path, d.message] for d in self.diagnostics],
        }
        lines = [json.dumps(header, sort_keys=True)]
        for c in self._components.values():
            rec = {
                "id": c.id,
                "role": c.role.value,
                "file": c.file_path,
                "span": list(c.span),
                "offsets": [c.start, c.end],
                "text": c.raw_text,
                "tokens": [[t.kind.value, t.text, t.line, t.column] for t in c.tokens],
            }
            if c.role is Role.STATEMENT:
                rec["context"] = self.containment[c.id]
            lines.append(json.dumps(rec, sort_keys=True, ensure_ascii=False))
        return lines

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.to_lines()) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CorpusIndex":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines:
            raise CorpusError(f"{path}: empty index file")
        header = json.loads(lines[0])
        if header.get("format") != INDEX_FORMAT:
            raise CorpusError(f"{path}: not an index file")
        if header.get("version") != INDEX_VERSION:
            raise CorpusError(f"{path}: unsupported index version {header.get('version')}")
        components = []
        containment = {}
        for line in lines[1:]:
            rec = json.loads(line)
            tokens = tuple(Token(TokenKind(k), t, ln, col) for k, t, ln, col in rec["tokens"])
            comp = SourceComponent(
                id=rec["id"],
                role=Role(rec["role"]),
                file_path=rec["file"],
                span=tuple(rec["span"]),
                raw_text=rec["text"],
                tokens=tokens,
                start=rec["offsets"][0],
                end=rec["offsets"][1],
            )
            components.append(comp)
            if "context" in rec:
                containment[comp.id] = rec["context"]
        diags = [Diagnostic(p, m) for p, m in header.get("diagnostics", [])]
        return cls(components, containment, header["files"], diags)


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _segment_file(args: tuple[str, str]) -> tuple[str, Segmentation | str]:
    rel, text = args
    try:
        return rel, JavaFrontend().segment(text, rel)
    except SegmentationError as exc:
        return rel, str(exc)


def collect_files(root: Path, patterns: Iterable[str]) -> list[Path]:
    found: set[Path] = set()
    for pattern in patterns:
        found.update(p for p in root.glob(pattern) if p.is_file())
    return sorted(found, key=lambda p: p.relative_to(root).as_posix())


def build_index(
    root: str | Path,
    file_filter: Iterable[str] = DEFAULT_FILTER,
    jobs: int = 1,
) -> CorpusIndex:
    """Ingest every matching file under ``root`` into a CorpusIndex.

    Files are visited in sorted path order. A file that fails to lex or
    segment is recorded as a diagnostic and skipped.

    Raises:
        CorpusError: if ``root`` is not a directory or nothing was ingested.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"{root}: not a directory")
    inputs = []
    for p in collect_files(root, file_filter):
        rel = p.relative_to(root).as_posix()
        try:
            inputs.append((rel, p.read_text(encoding="utf-8")))
        except UnicodeDecodeError as exc:
            inputs.append((rel, None, str(exc)))
    if not inputs:
        raise CorpusError("empty corpus")

    decodable = [i for i in inputs if len(i) == 2]
    if jobs > 1 and len(decodable) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(_segment_file, decodable))
    else:
        results = dict(map(_segment_file, decodable))

    components: list[SourceComponent] = []
    containment: dict[str, str] = {}
    files: list[str] = []
    diagnostics: list[Diagnostic] = []
    for item in inputs:
        rel = item[0]
        outcome = results.get(rel, item[-1])
        if isinstance(outcome, str):
            log.warning("skipping %s: %s", rel, outcome)
            diagnostics.append(Diagnostic(rel, outcome))
            continue
        files.append(rel)
        components.extend(outcome.methods)
        components.extend(outcome.statements)
        containment.update(outcome.containment)
    if not files:
        raise CorpusError("empty corpus")
    return CorpusIndex(components, containment, files, diagnostics)
