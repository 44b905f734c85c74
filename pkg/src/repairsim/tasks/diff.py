"""Minimal unified-diff reader: hunks with numbered removed/added lines."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

HUNK_HEADER = re.compile(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@")


class DiffParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DiffHunk:
    file_path: str
    old_start: int
    new_start: int
    removed: tuple[tuple[int, str], ...] = field(default=())
    added: tuple[tuple[int, str], ...] = field(default=())


def _strip_prefix(path: str) -> str:
    path = path.split("\t", 1)[0].strip()
    if path.startswith(("a/", "b/")):
        return path[2:]
    return path


def parse_diff(text: str) -> list[DiffHunk]:
    """Parse unified-diff text into hunks; context lines are dropped.

    Raises:
        DiffParseError: on a malformed ``@@`` header.
    """
    lines = text.splitlines()
    hunks: list[DiffHunk] = []
    old_path = new_path = ""
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("diff --git "):
            parts = line.split()
            if len(parts) >= 4:
                old_path, new_path = _strip_prefix(parts[2]), _strip_prefix(parts[3])
            i += 1
            continue
        if line.startswith("--- "):
            old_path = _strip_prefix(line[4:])
            i += 1
            continue
        if line.startswith("+++ "):
            new_path = _strip_prefix(line[4:])
            i += 1
            continue
        if not line.startswith("@@"):
            i += 1
            continue
        m = HUNK_HEADER.match(line)
        if m is None:
            raise DiffParseError(f"malformed hunk header {line!r}", i + 1)
        old_start, new_start = int(m.group(1)), int(m.group(3))
        old_left = int(m.group(2)) if m.group(2) is not None else 1
        new_left = int(m.group(4)) if m.group(4) is not None else 1
        old_no, new_no = old_start, new_start
        removed: list[tuple[int, str]] = []
        added: list[tuple[int, str]] = []
        i += 1
        while i < len(lines) and (old_left > 0 or new_left > 0):
            body = lines[i]
            tag, content = body[:1], body[1:]
            if tag == "\\":
                pass  # "\ No newline at end of file"
            elif tag == "-":
                removed.append((old_no, content))
                old_no += 1
                old_left -= 1
            elif tag == "+":
                added.append((new_no, content))
                new_no += 1
                new_left -= 1
            elif tag in (" ", ""):
                old_no += 1
                new_no += 1
                old_left -= 1
                new_left -= 1
            else:
                raise DiffParseError(f"unexpected line in hunk body {body!r}", i + 1)
            i += 1
        while i < len(lines) and lines[i].startswith("\\"):
            i += 1
        path = new_path if new_path and new_path != "/dev/null" else old_path
        hunks.append(DiffHunk(path, old_start, new_start, tuple(removed), tuple(added)))
    return hunks
