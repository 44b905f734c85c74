"""Synthetic Java applications with planted repair tasks.

``planted``: 10 domains x 3 methods (~210 statements). Each domain has one
one-line replacement whose correct ingredient is a near-duplicate of the
removed line, placed in a method of a different file.

``combined``: donor methods carry distinctive tokens while the replaced
statements are generic arithmetic, so ranking donors first helps.

``two_topic``: statements drawn from two disjoint identifier vocabularies.
"""

from __future__ import annotations

import difflib
import random
from dataclasses import dataclass, field
from pathlib import Path

PACKAGE_DIR = "src/main/java/org/fixture"


@dataclass
class Fixture:
    files: dict[str, str]
    diffs: dict[str, str] = field(default_factory=dict)
    # diff name -> number of tasks it should yield
    expected_tasks: dict[str, int] = field(default_factory=dict)

    def write(self, root: str | Path) -> tuple[Path, Path]:
        """Write sources under ``root/app`` and diffs under ``root/diffs``."""
        root = Path(root)
        app, diffs = root / "app", root / "diffs"
        for rel, text in self.files.items():
            p = app / rel
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(text, encoding="utf-8")
        diffs.mkdir(parents=True, exist_ok=True)
        for name, text in self.diffs.items():
            (diffs / f"{name}.diff").write_text(text, encoding="utf-8")
        return app, diffs


def unified(path: str, before: str, after: str) -> str:
    lines = difflib.unified_diff(
        before.splitlines(keepends=True),
        after.splitlines(keepends=True),
        fromfile=f"a/{path}",
        tofile=f"b/{path}",
        n=3,
    )
    return f"diff --git a/{path} b/{path}\n" + "".join(lines)


def _replace_line(text: str, old: str, new: str) -> str:
    lines = text.splitlines(keepends=True)
    hits = [i for i, ln in enumerate(lines) if ln.strip() == old]
    assert len(hits) == 1, (old, len(hits))
    i = hits[0]
    indent = lines[i][: len(lines[i]) - len(lines[i].lstrip())]
    lines[i] = indent + new + "\n"
    return "".join(lines)


# (noun, modification point, correct ingredient, extra helper statements)
PLANTED_DOMAINS = [
    (
        "invoice",
        "double invoiceTotal = invoiceLedger.sumNet(invoiceLines, invoiceRate);",
        "double invoiceTotal = invoiceLedger.sumGross(invoiceLines, invoiceRate);",
        ["double invoiceTotal = invoiceLedger.sumNet(invoiceLines, invoiceRate);"],
    ),
    (
        "shipment",
        "shipmentRoute.assignCarrier(shipmentParcel, primaryCarrier);",
        "shipmentRoute.assignCarrier(shipmentParcel, backupCarrier);",
        [],
    ),
    (
        "sensor",
        "sensorReading = sensorFilter.smooth(sensorRaw, sensorWindow);",
        "sensorReading = sensorFilter.smooth(sensorWindow, sensorRaw);",
        ["sensorReading = sensorFilter.smooth(sensorRaw, sensorWindow, 2);"],
    ),
    (
        "account",
        "accountBalance -= withdrawalFee;",
        "accountBalance += withdrawalFee;",
        ["accountBalance -= withdrawalFee;"],
    ),
    (
        "patient",
        "return patientRecord.getWardNumber(admissionDate);",
        "return patientRecord.getBedNumber(admissionDate);",
        [],
    ),
    (
        "ticket",
        "ticketQueue.escalate(ticketPriority + 1);",
        "ticketQueue.escalate(ticketPriority - 1);",
        [],
    ),
    (
        "course",
        "if (courseRoster.size() > maxCourseSeats) {",
        "if (courseRoster.size() >= maxCourseSeats) {",
        [],
    ),
    (
        "vehicle",
        "vehicleSpeed = Math.min(vehicleSpeed, speedLimit);",
        "vehicleSpeed = Math.max(vehicleSpeed, speedLimit);",
        [],
    ),
    (
        "recipe",
        "recipeSteps.add(stepIndex, recipeStep);",
        "recipeSteps.add(stepIndex + 1, recipeStep);",
        [],
    ),
    (
        "portfolio",
        "portfolioValue = portfolioAssets.stream().mapToDouble(Asset::price).sum();",
        "portfolioValue = portfolioAssets.stream().mapToDouble(Asset::value).sum();",
        [],
    ),
]


def _block_stmt(line: str, indent: str, body: str) -> str:
    """A statement line; headers get a one-statement block."""
    if line.endswith("{"):
        return f"{indent}{line}\n{indent}    {body}\n{indent}}}\n"
    return f"{indent}{line}\n"


def _service(noun: str, mp: str, extras: list[str]) -> str:
    cap = noun.capitalize()
    ind = "        "
    extra = "".join(f"{ind}{e}\n" for e in extras)
    return (
        f"package org.fixture;\n\n"
        f"import java.util.List;\n\n"
        f"/** Handles {noun} requests. */\n"
        f"public class {cap}Service {{\n"
        f"    private final Log log = Log.get({cap}Service.class);\n\n"
        f"    public void process{cap}(List<Item> {noun}Items) {{\n"
        f'{ind}log.info("processing {noun}");\n'
        f"{ind}int {noun}Count = {noun}Items.size();\n"
        + _block_stmt(mp, ind, f"{noun}Items.clear();")
        + f"{ind}if ({noun}Count > LIMIT) {{\n"
        f"{ind}    {noun}Items.clear();\n"
        f"{ind}}}\n"
        f"{ind}for (int i = 0; i < {noun}Count; i++) {{\n"
        f"{ind}    audit.record(i);  // keep a trail\n"
        f"{ind}}}\n"
        f"{ind}notifyObservers();\n"
        f"    }}\n\n"
        f"    int summarize{cap}(String key) {{\n"
        f"{ind}StringBuilder sb = new StringBuilder();\n"
        f'{ind}sb.append("{noun}");\n'
        f"{ind}sb.append(':');\n"
        f"{ind}counter++;\n"
        + extra
        + f"{ind}cache.put(key, sb.toString());\n"
        f"{ind}return sb.length();\n"
        f"    }}\n"
        f"}}\n"
    )


def _audit(noun: str, ci: str) -> str:
    cap = noun.capitalize()
    ind = "        "
    return (
        f"package org.fixture;\n\n"
        f"public class {cap}Audit {{\n"
        f"    boolean verify{cap}(List<Item> {noun}Items) {{\n"
        f'{ind}log.debug("verifying {noun}");\n'
        + _block_stmt(ci, ind, "history.mark();")
        + f"{ind}boolean {noun}Valid = checker.validate({noun}Items);\n"
        f"{ind}if (!{noun}Valid) {{\n"
        f'{ind}    throw new IllegalStateException("invalid {noun}");\n'
        f"{ind}}}\n"
        f"{ind}history.append({noun}Items.size());\n"
        f"{ind}return {noun}Valid;\n"
        f"    }}\n"
        f"}}\n"
    )


def planted() -> Fixture:
    files: dict[str, str] = {}
    diffs: dict[str, str] = {}
    expected: dict[str, int] = {}
    for noun, mp, ci, extras in PLANTED_DOMAINS:
        cap = noun.capitalize()
        svc_path = f"{PACKAGE_DIR}/{cap}Service.java"
        service = _service(noun, mp, extras)
        files[svc_path] = service
        files[f"{PACKAGE_DIR}/{cap}Audit.java"] = _audit(noun, ci)
        # the copy of mp planted in the helper must stay untouched
        lines = service.splitlines(keepends=True)
        i = next(k for k, ln in enumerate(lines) if ln.strip() == mp)
        after_lines = list(lines)
        after_lines[i] = lines[i].replace(mp, ci)
        diffs[f"fix-{noun}"] = unified(svc_path, service, "".join(after_lines))
        expected[f"fix-{noun}"] = 1

    # hunks that the inclusion filters must reject
    svc_path = f"{PACKAGE_DIR}/InvoiceService.java"
    service = files[svc_path]
    two_added = service.replace(
        '        log.info("processing invoice");\n',
        '        log.info("processing invoice");\n        log.info("twice");\n',
    ).replace("        notifyObservers();\n", "        notifyObservers(true);\n")
    diffs["reject-shapes"] = unified(svc_path, service, two_added)
    expected["reject-shapes"] = 0
    same_method = _replace_line(service, "notifyObservers();", "invoiceItems.clear();")
    diffs["reject-in-recipient"] = unified(svc_path, service, same_method)
    expected["reject-in-recipient"] = 0
    nowhere = _replace_line(service, "notifyObservers();", "notifyAllObservers(this);")
    diffs["reject-not-in-app"] = unified(svc_path, service, nowhere)
    expected["reject-not-in-app"] = 0
    return Fixture(files, diffs, expected)


COMBINED_DOMAINS = [
    ("ledger", "total"),
    ("harbor", "count"),
    ("orchard", "index"),
    ("quarry", "offset"),
    ("glacier", "level"),
    ("meadow", "depth"),
]
COMBINED_FILLERS = 5


def combined() -> Fixture:
    files: dict[str, str] = {}
    diffs: dict[str, str] = {}
    expected: dict[str, int] = {}
    ind = "        "
    for d, v in COMBINED_DOMAINS:
        cap = d.capitalize()
        shared = (
            f"{ind}{d}Entries = {d}Source.load({d}Key);\n"
            f"{ind}{d}Balance = reconcile{cap}({d}Entries);\n"
        )
        mp, ci = f"{v} = {v} + 1;", f"{v} = {v} + 2;"
        flow_path = f"{PACKAGE_DIR}/{cap}Flow.java"
        flow = (
            f"package org.fixture;\n\npublic class {cap}Flow {{\n"
            f"    void run{cap}() {{\n"
            + shared
            + f"{ind}{mp}\n"
            f"{ind}{d}Sink.store({d}Balance, {d}Key);\n"
            f"{ind}publish{cap}({d}Balance);\n"
            f"    }}\n}}\n"
        )
        files[flow_path] = flow
        files[f"{PACKAGE_DIR}/{cap}Replay.java"] = (
            f"package org.fixture;\n\npublic class {cap}Replay {{\n"
            f"    void replay{cap}() {{\n"
            + shared
            + f"{ind}{ci}\n"
            f"{ind}{d}Sink.store({d}Balance, {d}Key);\n"
            f"    }}\n}}\n"
        )
        chores = [f"package org.fixture;\n\npublic class {cap}Chores {{\n"]
        for j in range(1, COMBINED_FILLERS + 1):
            chores.append(
                f"    void tidy{j}() {{\n"
                f"{ind}{v} = 1 + {v};\n"
                f"{ind}helper{j}.reset();\n"
                f'{ind}log.trace("tidy");\n'
                f"    }}\n"
            )
        chores.append("}\n")
        files[f"{PACKAGE_DIR}/{cap}Chores.java"] = "".join(chores)
        diffs[f"fix-{d}"] = unified(flow_path, flow, _replace_line(flow, mp, ci))
        expected[f"fix-{d}"] = 1
    return Fixture(files, diffs, expected)


TOPIC_A = [f"alpha{w}" for w in ("Pump", "Valve", "Pipe", "Flow", "Tank", "Gauge", "Seal", "Drain")]
TOPIC_B = [f"beta{w}" for w in ("Font", "Glyph", "Kern", "Serif", "Ink", "Page", "Margin", "Line")]


def two_topic(statements_per_method: int = 6, methods_per_topic: int = 8, seed: int = 11) -> Fixture:
    """Two files whose statements use disjoint identifier vocabularies."""
    rng = random.Random(seed)
    files = {}
    for name, vocab in (("Plumbing", TOPIC_A), ("Typesetting", TOPIC_B)):
        out = [f"package org.fixture;\n\npublic class {name} {{\n"]
        for m in range(methods_per_topic):
            out.append(f"    void step{m}() {{\n")
            for _ in range(statements_per_method):
                a, b, c, e = (rng.choice(vocab) for _ in range(4))
                out.append(f"        {a} = {b}.{c}({e});\n")
            out.append("    }\n")
        out.append("}\n")
        files[f"{PACKAGE_DIR}/{name}.java"] = "".join(out)
    return Fixture(files)


FIXTURES = {"planted": planted, "combined": combined, "two-topic": two_topic}
