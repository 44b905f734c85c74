"""Repair tasks from one-statement replacement hunks."""

from __future__ import annotations

import json
import random
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..corpus import CorpusIndex, LexError, SourceComponent, lex, statement_from_text, token_key
from ..corpus.components import strip_structural
from .diff import DiffHunk

NOT_ONE_STATEMENT = "not-one-statement-replacement"
FILE_NOT_IN_CORPUS = "file-not-in-corpus"
NOT_A_STATEMENT = "not-a-statement"
SAME_AS_MODIFICATION_POINT = "modification-point-equals-ingredient"
NOT_IN_APPLICATION = "ingredient-not-in-application"
IN_RECIPIENT_CONTEXT = "ingredient-in-recipient-context"


@dataclass(frozen=True)
class RepairTask:
    task_id: str
    project: str
    modification_point: SourceComponent
    correct_ingredient: SourceComponent
    recipient_context: SourceComponent
    removed_text: str
    added_text: str
    corpus: CorpusIndex = field(repr=False, compare=False)

    @property
    def file_path(self) -> str:
        return self.modification_point.file_path

    @property
    def line(self) -> int:
        return self.modification_point.span[0]

    def to_record(self) -> dict:
        return {
            "task_id": self.task_id,
            "project": self.project,
            "file": self.file_path,
            "line": self.line,
            "added_line": self.correct_ingredient.span[0],
            "removed": self.removed_text,
            "added": self.added_text,
            "modification_point": self.modification_point.id,
            "recipient_context": self.recipient_context.id,
        }

    @classmethod
    def from_record(cls, record: dict, corpus: CorpusIndex) -> "RepairTask":
        mp = corpus[record["modification_point"]]
        ingredient = statement_from_text(record["added"], record["file"], record["added_line"])
        if ingredient is None:
            raise ValueError(f"task {record['task_id']}: added text is not a statement")
        return cls(
            task_id=record["task_id"],
            project=record["project"],
            modification_point=mp,
            correct_ingredient=ingredient,
            recipient_context=corpus[record["recipient_context"]],
            removed_text=record["removed"],
            added_text=record["added"],
            corpus=corpus,
        )


@dataclass(frozen=True)
class Rejection:
    candidate_id: str
    file_path: str
    reason: str
    detail: str = ""

    def to_record(self) -> dict:
        return {"candidate": self.candidate_id, "file": self.file_path, "reason": self.reason, "detail": self.detail}


def _resolve_path(corpus: CorpusIndex, path: str) -> Optional[str]:
    if path in corpus.files:
        return path
    hits = [f for f in corpus.files if f.endswith("/" + path) or path.endswith("/" + f)]
    return hits[0] if len(hits) == 1 else None


def _find_modification_point(corpus: CorpusIndex, path: str, line: int, text: str) -> Optional[SourceComponent]:
    try:
        key = token_key(strip_structural(lex(text)))
    except LexError:
        return None
    on_line = []
    for c in corpus.in_file(path):
        if c.role.value != "statement" or not (c.span[0] <= line <= c.span[1]):
            continue
        if c.span != (line, line):
            return None  # the line is a fragment of a multi-line statement
        on_line.append(c)
    hits = [c for c in on_line if c.key == key]
    return hits[0] if len(hits) == 1 else None


def extract_tasks(
    hunks: Sequence[DiffHunk],
    corpus: CorpusIndex,
    project: str = "",
    source: str = "diff",
) -> tuple[list[RepairTask], list[Rejection]]:
    """Turn hunks into repair tasks; every other hunk gets a logged rejection.

    ``corpus`` must be built from the pre-change tree. Task ids are
    ``{source}:{hunk number}``.
    """
    tasks: list[RepairTask] = []
    rejected: list[Rejection] = []
    for n, hunk in enumerate(hunks):
        cid = f"{source}:{n}"

        def reject(reason: str, detail: str = "") -> None:
            rejected.append(Rejection(cid, hunk.file_path, reason, detail))

        if len(hunk.removed) != 1 or len(hunk.added) != 1:
            reject(NOT_ONE_STATEMENT, f"{len(hunk.removed)} removed, {len(hunk.added)} added")
            continue
        path = _resolve_path(corpus, hunk.file_path)
        if path is None:
            reject(FILE_NOT_IN_CORPUS, hunk.file_path)
            continue
        (old_line, removed), (new_line, added) = hunk.removed[0], hunk.added[0]
        mp = _find_modification_point(corpus, path, old_line, removed)
        if mp is None:
            reject(NOT_A_STATEMENT, f"removed line {old_line}")
            continue
        try:
            ingredient = statement_from_text(added, path, new_line)
        except LexError:
            ingredient = None
        if ingredient is None:
            reject(NOT_A_STATEMENT, f"added line {new_line}")
            continue
        if ingredient.key == mp.key:
            reject(SAME_AS_MODIFICATION_POINT)
            continue
        recipient = corpus.enclosing(mp)
        occurrences = corpus.equivalents(ingredient)
        if not occurrences:
            reject(NOT_IN_APPLICATION)
            continue
        if any(recipient.contains(s) for s in occurrences):
            reject(IN_RECIPIENT_CONTEXT, recipient.id)
            continue
        tasks.append(RepairTask(cid, project, mp, ingredient, recipient, removed.strip(), added.strip(), corpus))
    return tasks, rejected


def sample_tasks(tasks: Sequence[RepairTask], per_project_limit: int, seed: int) -> list[RepairTask]:
    """At most ``per_project_limit`` tasks per project, chosen with a seeded RNG.

    Selected tasks keep their input order.
    """
    if per_project_limit < 1:
        raise ValueError("per-project limit must be positive")
    groups: OrderedDict[str, list[int]] = OrderedDict()
    for i, t in enumerate(tasks):
        groups.setdefault(t.project, []).append(i)
    keep: set[int] = set()
    for project, members in groups.items():
        if len(members) <= per_project_limit:
            keep.update(members)
        else:
            rng = random.Random(f"{seed}:{project}")
            keep.update(rng.sample(members, per_project_limit))
    return [t for i, t in enumerate(tasks) if i in keep]


def write_jsonl(path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True, ensure_ascii=False) + "\n")


def read_jsonl(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
