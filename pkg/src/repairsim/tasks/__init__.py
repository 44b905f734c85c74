from .diff import DiffHunk, DiffParseError, parse_diff
from .extract import (
    FILE_NOT_IN_CORPUS,
    IN_RECIPIENT_CONTEXT,
    NOT_A_STATEMENT,
    NOT_IN_APPLICATION,
    NOT_ONE_STATEMENT,
    SAME_AS_MODIFICATION_POINT,
    Rejection,
    RepairTask,
    extract_tasks,
    read_jsonl,
    sample_tasks,
    write_jsonl,
)

__all__ = [
    "DiffHunk",
    "DiffParseError",
    "FILE_NOT_IN_CORPUS",
    "IN_RECIPIENT_CONTEXT",
    "NOT_A_STATEMENT",
    "NOT_IN_APPLICATION",
    "NOT_ONE_STATEMENT",
    "Rejection",
    "RepairTask",
    "SAME_AS_MODIFICATION_POINT",
    "extract_tasks",
    "parse_diff",
    "read_jsonl",
    "sample_tasks",
    "write_jsonl",
]
