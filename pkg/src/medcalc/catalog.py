"""Declarative task catalog: loading, validation, statistics.

The catalog document is a single JSON file with three top-level sections
(`indicator`, `equation`, `scale`); see docs/catalog-format.md. Catalogs are
immutable after load and safe for unrestricted concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .engine import FormulaError, Program, compile_expr, free_variables, parse

KINDS = ("integer", "real", "choice")
MODES = ("single", "multi")

_INDICATOR_FIELDS = {"label", "kind", "range", "precision", "unit", "options"}
_EQUATION_FIELDS = {"category", "formula", "inputs", "result", "explanation"}
_SCALE_FIELDS = {"category", "items", "criteria"}
_ITEM_FIELDS = {"title", "mode", "options"}


class CatalogError(Exception):
    """Base class; `task` names the offending entry when known."""

    def __init__(self, message: str, task: str = ""):
        super().__init__(message)
        self.task = task


class CatalogParseError(CatalogError):
    """Malformed document (bad JSON, wrong shapes)."""


class CatalogReferenceError(CatalogError):
    """A task references an indicator that does not exist."""


class CatalogFormulaError(CatalogError):
    """A task's formula does not parse under the engine grammar."""


class CatalogValidationError(CatalogError):
    """Any other invariant breach (ranges, options, precision, uniqueness)."""


@dataclass
class IndicatorSpec:
    name: str
    kind: str
    label: str = ""
    range: tuple[float, float] | None = None
    precision: int | None = None
    unit: str = ""
    options: tuple[tuple[str, float], ...] = ()
    extra: dict = field(default_factory=dict)

    @property
    def display_label(self) -> str:
        return self.label or self.name


@dataclass
class EquationTask:
    name: str
    category: str
    formula: str
    inputs: tuple[str, ...]
    result: str
    explanation: str = ""
    extra: dict = field(default_factory=dict)


@dataclass
class ScaleItem:
    title: str
    mode: str
    options: tuple[tuple[str, int], ...]
    extra: dict = field(default_factory=dict)

    def max_score(self) -> int:
        scores = [s for _, s in self.options]
        if self.mode == "multi":
            positive = sum(s for s in scores if s > 0)
            return positive if positive > 0 else max(scores)
        return max(scores)


@dataclass
class ScaleTask:
    name: str
    category: str
    items: tuple[ScaleItem, ...]
    criteria: str = ""
    extra: dict = field(default_factory=dict)

    def max_score(self) -> int:
        return sum(item.max_score() for item in self.items)


@dataclass
class Violation:
    task: str
    rule: str
    message: str


@dataclass
class TaskCatalog:
    indicators: dict[str, IndicatorSpec] = field(default_factory=dict)
    equations: dict[str, EquationTask] = field(default_factory=dict)
    scales: dict[str, ScaleTask] = field(default_factory=dict)
    _programs: dict[str, Program] = field(default_factory=dict, compare=False, repr=False)

    def task_names(self) -> list[str]:
        return list(self.equations) + list(self.scales)

    def family_of(self, name: str) -> str | None:
        if name in self.equations:
            return "equation"
        if name in self.scales:
            return "scale"
        return None

    def program(self, equation_name: str) -> Program:
        """Compiled formula for an equation task, cached per catalog."""
        if equation_name not in self._programs:
            task = self.equations[equation_name]
            self._programs[equation_name] = compile_expr(parse(task.formula), task.formula)
        return self._programs[equation_name]


@dataclass
class StatsReport:
    families: dict[str, int]
    categories: dict[str, dict[str, int]]
    indicator_count: int
    indicator_usage: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "families": dict(self.families),
            "categories": {f: dict(c) for f, c in self.categories.items()},
            "indicator_count": self.indicator_count,
            "indicator_usage": dict(self.indicator_usage),
        }


# Parsing ---------------------------------------------------------------------


def _parse_options(raw, *, task: str, integer_scores: bool) -> tuple[tuple[str, float], ...]:
    """Options come as a label->value object, [label, value] pairs, or a bare
    list of labels (values then default to the 1-based index)."""
    pairs: list[tuple[str, float]] = []
    if isinstance(raw, dict):
        pairs = [(str(k), v) for k, v in raw.items()]
    elif isinstance(raw, list):
        for i, entry in enumerate(raw):
            if isinstance(entry, str):
                if integer_scores:
                    raise CatalogParseError(
                        f"{task}: scale options need explicit scores", task
                    )
                pairs.append((entry, i + 1))
            elif isinstance(entry, (list, tuple)) and len(entry) == 2:
                pairs.append((str(entry[0]), entry[1]))
            elif isinstance(entry, dict) and "label" in entry:
                value = entry.get("score" if integer_scores else "value")
                if value is None:
                    raise CatalogParseError(f"{task}: option missing value", task)
                pairs.append((str(entry["label"]), value))
            else:
                raise CatalogParseError(f"{task}: malformed option {entry!r}", task)
    else:
        raise CatalogParseError(f"{task}: options must be a list or mapping", task)
    out = []
    for label, value in pairs:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise CatalogParseError(f"{task}: option {label!r} value must be numeric", task)
        out.append((label, int(value) if integer_scores else float(value)))
    return tuple(out)


def _parse_indicator(name: str, raw: dict) -> IndicatorSpec:
    if not isinstance(raw, dict):
        raise CatalogParseError(f"indicator {name!r} must be an object", name)
    rng = raw.get("range")
    if rng is not None:
        if not (isinstance(rng, list) and len(rng) == 2):
            raise CatalogParseError(f"indicator {name!r}: range must be [lo, hi]", name)
        rng = (rng[0], rng[1])
    precision = raw.get("precision")
    options: tuple[tuple[str, float], ...] = ()
    if raw.get("options") is not None:
        options = _parse_options(raw["options"], task=name, integer_scores=False)
    return IndicatorSpec(
        name=name,
        kind=str(raw.get("kind", "")),
        label=str(raw.get("label", "")),
        range=rng,
        precision=precision,
        unit=str(raw.get("unit", "")),
        options=options,
        extra={k: v for k, v in raw.items() if k not in _INDICATOR_FIELDS},
    )


def _parse_equation(name: str, raw: dict) -> EquationTask:
    if not isinstance(raw, dict):
        raise CatalogParseError(f"equation {name!r} must be an object", name)
    inputs = raw.get("inputs", [])
    if not isinstance(inputs, list):
        raise CatalogParseError(f"equation {name!r}: inputs must be a list", name)
    return EquationTask(
        name=name,
        category=str(raw.get("category", "")),
        formula=str(raw.get("formula", "")),
        inputs=tuple(str(i) for i in inputs),
        result=str(raw.get("result", "")),
        explanation=str(raw.get("explanation", "")),
        extra={k: v for k, v in raw.items() if k not in _EQUATION_FIELDS},
    )


def _parse_scale(name: str, raw: dict) -> ScaleTask:
    if not isinstance(raw, dict):
        raise CatalogParseError(f"scale {name!r} must be an object", name)
    items_raw = raw.get("items", [])
    if not isinstance(items_raw, list):
        raise CatalogParseError(f"scale {name!r}: items must be a list", name)
    items = []
    for entry in items_raw:
        if not isinstance(entry, dict):
            raise CatalogParseError(f"scale {name!r}: item must be an object", name)
        items.append(
            ScaleItem(
                title=str(entry.get("title", "")),
                mode=str(entry.get("mode", "single")),
                options=_parse_options(entry.get("options", []), task=name, integer_scores=True),
                extra={k: v for k, v in entry.items() if k not in _ITEM_FIELDS},
            )
        )
    return ScaleTask(
        name=name,
        category=str(raw.get("category", "")),
        items=tuple(items),
        criteria=str(raw.get("criteria", "")),
        extra={k: v for k, v in raw.items() if k not in _SCALE_FIELDS},
    )


def parse_catalog(text: str) -> TaskCatalog:
    """Structural parse only; invariants are checked by validate_catalog."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogParseError(f"malformed catalog document: {exc}") from exc
    if not isinstance(doc, dict):
        raise CatalogParseError("catalog document must be a JSON object")
    catalog = TaskCatalog()
    for name, raw in (doc.get("indicator") or {}).items():
        catalog.indicators[name] = _parse_indicator(name, raw)
    for name, raw in (doc.get("equation") or {}).items():
        catalog.equations[name] = _parse_equation(name, raw)
    for name, raw in (doc.get("scale") or {}).items():
        catalog.scales[name] = _parse_scale(name, raw)
    return catalog


# Validation ------------------------------------------------------------------


def _validate_indicator(spec: IndicatorSpec, out: list[Violation]) -> None:
    name = spec.name
    if spec.kind not in KINDS:
        out.append(Violation(name, "kind", f"unknown kind {spec.kind!r}"))
        return
    numeric = spec.kind in ("integer", "real")
    if numeric and spec.range is None:
        out.append(Violation(name, "range-presence", f"{spec.kind} indicator needs a range"))
    if not numeric and spec.range is not None:
        out.append(Violation(name, "range-presence", "choice indicator must not have a range"))
    if spec.range is not None:
        lo, hi = spec.range
        if not (isinstance(lo, (int, float)) and isinstance(hi, (int, float))) or lo > hi:
            out.append(Violation(name, "range-order", f"invalid range [{lo}, {hi}]"))
    if spec.precision is not None and (
        not isinstance(spec.precision, int) or isinstance(spec.precision, bool) or spec.precision < 0
    ):
        out.append(Violation(name, "precision", f"precision must be a non-negative integer, got {spec.precision!r}"))
    if spec.kind == "real" and spec.precision is None:
        out.append(Violation(name, "precision", "real indicator needs a precision"))
    if spec.kind == "choice":
        if not spec.options:
            out.append(Violation(name, "options-nonempty", "choice indicator needs options"))
        labels = [label for label, _ in spec.options]
        if len(labels) != len(set(labels)):
            out.append(Violation(name, "options-unique", "duplicate option labels"))
    elif spec.options:
        out.append(Violation(name, "options-nonempty", f"{spec.kind} indicator must not have options"))


def _validate_equation(task: EquationTask, catalog: TaskCatalog, out: list[Violation]) -> None:
    name = task.name
    for ref in task.inputs + (task.result,):
        if ref not in catalog.indicators:
            out.append(Violation(name, "dangling-reference", f"unknown indicator {ref!r}"))
    result = catalog.indicators.get(task.result)
    if result is not None and result.precision is None:
        out.append(Violation(name, "result-precision", f"result indicator {task.result!r} needs a precision"))
    try:
        expr = parse(task.formula)
    except FormulaError as exc:
        out.append(Violation(name, "formula-syntax", str(exc)))
        return
    unbound = free_variables(expr) - set(task.inputs)
    if unbound:
        out.append(
            Violation(name, "free-variable", f"formula variables not in inputs: {sorted(unbound)}")
        )


def _validate_scale(task: ScaleTask, out: list[Violation]) -> None:
    name = task.name
    if not task.items:
        out.append(Violation(name, "items-nonempty", "scale has no items"))
    for item in task.items:
        if item.mode not in MODES:
            out.append(Violation(name, "item-mode", f"item {item.title!r}: unknown mode {item.mode!r}"))
        if not item.options:
            out.append(Violation(name, "item-options-nonempty", f"item {item.title!r} has no options"))
            continue
        labels = [label for label, _ in item.options]
        if len(labels) != len(set(labels)):
            out.append(Violation(name, "item-options-unique", f"item {item.title!r}: duplicate option labels"))


def validate_catalog(catalog: TaskCatalog) -> list[Violation]:
    """All invariant breaches as data, ordered by task name."""
    out: list[Violation] = []
    for name in sorted(set(catalog.equations) | set(catalog.scales)):
        if name in catalog.equations and name in catalog.scales:
            out.append(Violation(name, "unique-name", "task name used by both an equation and a scale"))
    for spec in catalog.indicators.values():
        _validate_indicator(spec, out)
    for task in catalog.equations.values():
        _validate_equation(task, catalog, out)
    for scale in catalog.scales.values():
        _validate_scale(scale, out)
    out.sort(key=lambda v: (v.task, v.rule, v.message))
    return out


_ERROR_BY_RULE = {
    "dangling-reference": CatalogReferenceError,
    "formula-syntax": CatalogFormulaError,
}


def load_catalog(source: str) -> TaskCatalog:
    """Parse and fully validate a catalog document.

    Raises CatalogParseError / CatalogReferenceError / CatalogFormulaError /
    CatalogValidationError naming the offending task.
    """
    catalog = parse_catalog(source)
    violations = validate_catalog(catalog)
    if violations:
        first = violations[0]
        error = _ERROR_BY_RULE.get(first.rule, CatalogValidationError)
        lines = "; ".join(f"{v.task}: [{v.rule}] {v.message}" for v in violations)
        raise error(lines, first.task)
    return catalog


def load_catalog_file(path: str | Path) -> TaskCatalog:
    return load_catalog(Path(path).read_text(encoding="utf-8"))


# Serialization ---------------------------------------------------------------


def _options_doc(options, integer_scores: bool):
    return {label: (int(v) if integer_scores else v) for label, v in options}


def serialize_catalog(catalog: TaskCatalog) -> str:
    """Canonical document text; load_catalog(serialize_catalog(c)) == c."""
    doc: dict = {"indicator": {}, "equation": {}, "scale": {}}
    for name, spec in catalog.indicators.items():
        entry: dict = {"kind": spec.kind}
        if spec.label:
            entry["label"] = spec.label
        if spec.range is not None:
            entry["range"] = list(spec.range)
        if spec.precision is not None:
            entry["precision"] = spec.precision
        if spec.unit:
            entry["unit"] = spec.unit
        if spec.options:
            entry["options"] = _options_doc(spec.options, False)
        entry.update(spec.extra)
        doc["indicator"][name] = entry
    for name, task in catalog.equations.items():
        entry = {
            "category": task.category,
            "formula": task.formula,
            "inputs": list(task.inputs),
            "result": task.result,
        }
        if task.explanation:
            entry["explanation"] = task.explanation
        entry.update(task.extra)
        doc["equation"][name] = entry
    for name, scale in catalog.scales.items():
        items = []
        for item in scale.items:
            item_doc = {
                "title": item.title,
                "mode": item.mode,
                "options": _options_doc(item.options, True),
            }
            item_doc.update(item.extra)
            items.append(item_doc)
        entry = {"category": scale.category, "items": items}
        if scale.criteria:
            entry["criteria"] = scale.criteria
        entry.update(scale.extra)
        doc["scale"][name] = entry
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


# Statistics ------------------------------------------------------------------


def catalog_stats(catalog: TaskCatalog) -> StatsReport:
    """Counts by family and category, indicator count, input-usage frequency."""
    categories: dict[str, dict[str, int]] = {"equation": {}, "scale": {}}
    for task in catalog.equations.values():
        categories["equation"][task.category] = categories["equation"].get(task.category, 0) + 1
    for scale in catalog.scales.values():
        categories["scale"][scale.category] = categories["scale"].get(scale.category, 0) + 1
    usage: dict[str, int] = {}
    for task in catalog.equations.values():
        for ref in task.inputs:
            usage[ref] = usage.get(ref, 0) + 1
    return StatsReport(
        families={"equation": len(catalog.equations), "scale": len(catalog.scales)},
        categories=categories,
        indicator_count=len(catalog.indicators),
        indicator_usage=dict(sorted(usage.items(), key=lambda kv: (-kv[1], kv[0]))),
    )
