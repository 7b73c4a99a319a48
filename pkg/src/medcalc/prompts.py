"""Prompt rendering: one of four templates per case, selected by
(family, add_rule), with the input fragments shuffled by the case's own
seeded stream so rendering is reproducible from the case alone.

The template table ships as a versioned resource (data/templates.json);
docs/prompt-templates.md publishes all four variants verbatim.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from .catalog import ScaleTask, TaskCatalog
from .generate import GeneratedCase
from .seeding import SeededStream


class UnknownTaskError(LookupError):
    pass


@dataclass
class PromptBundle:
    case_id: str
    prompt: str
    template_id: str  # formula | formula+rule | scale | scale+rule


def _load_templates() -> dict:
    text = resources.files("medcalc.data").joinpath("templates.json").read_text("utf-8")
    return json.loads(text)


_TABLE = _load_templates()
_PLACEHOLDER = re.compile(r"\{(patient_info|task_name|precision|formula|explanation|criteria|boxed_line)\}")


def _fill(template: str, values: dict[str, str]) -> str:
    # plain replacement, not str.format: the boxed line itself contains braces
    return _PLACEHOLDER.sub(lambda m: values[m.group(1)], template)


def _point_word(score: int) -> str:
    return "point" if score in (-1, 0, 1) else "points"


def render_criteria(task: ScaleTask) -> str:
    """Scoring-criteria block in the published style:
    [Title] [Single Choice] / option (N point[s]) joined with " ; "."""
    if task.criteria:
        return task.criteria
    blocks = []
    for item in task.items:
        mode = "Single Choice" if item.mode == "single" else "Multiple Choice"
        opts = " ; ".join(f"{label} ({score} {_point_word(score)})" for label, score in item.options)
        blocks.append(f"[{item.title}] [{mode}]\n{opts}")
    return "\n".join(blocks)


def render_prompt(case: GeneratedCase, catalog: TaskCatalog) -> PromptBundle:
    family = catalog.family_of(case.task_name)
    if family is None:
        raise UnknownTaskError(f"case references unknown task {case.task_name!r}")

    fragments = list(case.inputs)
    SeededStream.from_case_seed(case.seed).fork("prompt").shuffle(fragments)
    patient_info = ", ".join(fragments) + "."

    values = {
        "patient_info": patient_info,
        "task_name": case.task_name,
        "boxed_line": _TABLE["boxed_line"],
        "precision": "",
        "formula": "",
        "explanation": "",
        "criteria": "",
    }
    if family == "equation":
        task = catalog.equations[case.task_name]
        values["precision"] = str(case.precision)
        values["formula"] = task.formula
        values["explanation"] = task.explanation
        template_id = "formula+rule" if case.add_rule else "formula"
    else:
        scale = catalog.scales[case.task_name]
        values["criteria"] = render_criteria(scale)
        template_id = "scale+rule" if case.add_rule else "scale"

    prompt = _fill(_TABLE["templates"][template_id], values)
    return PromptBundle(case_id=case.id, prompt=prompt, template_id=template_id)
