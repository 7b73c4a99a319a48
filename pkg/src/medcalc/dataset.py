"""JSONL dataset export.

One object per line, case-index order, byte-identical for identical
arguments. Schema pinned in docs/dataset-format.md.
"""

from __future__ import annotations

import json
from collections.abc import Iterator
from pathlib import Path

from .catalog import TaskCatalog
from .generate import GeneratedCase, gen_case, gen_task_case
from .prompts import render_prompt
from .seeding import SeededStream

DEFAULT_ADD_RULE_RATIO = 0.5

DATASET_FIELDS = (
    "id",
    "family",
    "task_name",
    "prompt",
    "inputs",
    "add_rule",
    "target",
    "precision",
    "seed",
)


class DatasetError(Exception):
    pass


def iter_cases(
    catalog: TaskCatalog,
    count: int,
    seed: int,
    add_rule_ratio: float = DEFAULT_ADD_RULE_RATIO,
    task: str | None = None,
) -> Iterator[GeneratedCase]:
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    for index in range(count):
        stream = SeededStream(seed, index)
        if task is not None:
            yield gen_task_case(catalog, task, stream, add_rule_ratio)
        else:
            yield gen_case(catalog, stream, add_rule_ratio)


def case_record(case: GeneratedCase, catalog: TaskCatalog) -> dict:
    prompt = render_prompt(case, catalog).prompt
    return {
        "id": case.id,
        "family": case.family,
        "task_name": case.task_name,
        "prompt": prompt,
        "inputs": list(case.inputs),
        "add_rule": case.add_rule,
        "target": case.target,
        "precision": case.precision,
        "seed": case.seed,
    }


def export_dataset(
    catalog: TaskCatalog,
    count: int,
    seed: int,
    add_rule_ratio: float = DEFAULT_ADD_RULE_RATIO,
    task: str | None = None,
) -> str:
    lines = [
        json.dumps(case_record(case, catalog), ensure_ascii=False, separators=(",", ":"))
        for case in iter_cases(catalog, count, seed, add_rule_ratio, task)
    ]
    return "\n".join(lines) + "\n"


def write_dataset(path: str | Path, text: str) -> None:
    Path(path).write_bytes(text.encode("utf-8"))


def read_dataset(path: str | Path) -> list[dict]:
    """Parse and schema-check an exported dataset."""
    rows: list[dict] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {lineno}: malformed JSON: {exc}") from exc
        missing = [f for f in DATASET_FIELDS if f not in row]
        if missing:
            raise DatasetError(f"line {lineno}: missing fields {missing}")
        rows.append(row)
    if not rows:
        raise DatasetError("dataset is empty")
    return rows
