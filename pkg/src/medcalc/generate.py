"""Case generator: samples indicator values, solves or scores, and emits
verifiable cases with deterministic per-index seeding.

Evaluation faults (division by zero, domain errors, non-finite results)
trigger a full re-sample of the case, capped at MAX_ATTEMPTS; anything past
the cap signals a degenerate range in the catalog.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import EquationTask, IndicatorSpec, ScaleTask, TaskCatalog
from .engine import DivisionByZero, DomainError, NonFiniteResult, round_to
from .seeding import SeededStream

MAX_ATTEMPTS = 100

_RESAMPLE_ERRORS = (DivisionByZero, DomainError, NonFiniteResult)


class GenerationExhausted(Exception):
    """Every attempt at a case failed to evaluate; the task's ranges are degenerate."""


class EmptyCatalogFamily(Exception):
    """gen_case needs at least one task in each family."""


@dataclass
class SampledValue:
    value: float
    text: str  # display form: rounded number, or the chosen option label


@dataclass
class GeneratedCase:
    id: str
    family: str  # "equation" | "scale"
    task_name: str
    inputs: list[str]  # rendered clinical fragments, generation order
    bound_values: dict  # name -> value (equation) | item title -> [labels] (scale)
    add_rule: bool
    target: str
    precision: int | None  # equation only
    seed: int  # per-case stream seed
    attempt_count: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "family": self.family,
            "task_name": self.task_name,
            "inputs": list(self.inputs),
            "bound_values": dict(self.bound_values),
            "add_rule": self.add_rule,
            "target": self.target,
            "precision": self.precision,
            "seed": self.seed,
            "attempt_count": self.attempt_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratedCase":
        return cls(
            id=data["id"],
            family=data["family"],
            task_name=data["task_name"],
            inputs=list(data["inputs"]),
            bound_values=dict(data.get("bound_values", {})),
            add_rule=bool(data["add_rule"]),
            target=str(data["target"]),
            precision=data.get("precision"),
            seed=int(data["seed"]),
            attempt_count=int(data.get("attempt_count", 1)),
        )


def sample_indicator(spec: IndicatorSpec, stream: SeededStream) -> SampledValue:
    """One draw per indicator: uniform integer/real in range, or uniform option."""
    rng = stream.rng
    if spec.kind == "integer":
        lo, hi = spec.range
        v = rng.randint(int(lo), int(hi))
        return SampledValue(float(v), str(v))
    if spec.kind == "real":
        lo, hi = spec.range
        text = round_to(rng.uniform(lo, hi), spec.precision)
        return SampledValue(float(text), text)
    label, value = spec.options[rng.randrange(len(spec.options))]
    return SampledValue(float(value), label)


def _fragment(spec: IndicatorSpec, sample: SampledValue) -> str:
    # choice inputs read as plain clinical facts ("female"), numeric ones as
    # "<label> <value><unit>" with the unit concatenated verbatim
    if spec.kind == "choice":
        return sample.text
    return f"{spec.display_label} {sample.text}{spec.unit}"


def _case_id(stream: SeededStream) -> str:
    return f"case-{stream.index:06d}-{stream.case_seed:016x}"


def gen_equation_case(
    task: EquationTask,
    catalog: TaskCatalog,
    stream: SeededStream,
    add_rule_ratio: float,
) -> GeneratedCase:
    program = catalog.program(task.name)
    specs = [catalog.indicators[name] for name in task.inputs]
    precision = catalog.indicators[task.result].precision
    for attempt in range(1, MAX_ATTEMPTS + 1):
        samples = [sample_indicator(spec, stream) for spec in specs]
        bound = {spec.name: s.value for spec, s in zip(specs, samples)}
        try:
            value = program.run(bound)
        except _RESAMPLE_ERRORS:
            continue
        target = round_to(value, precision)
        add_rule = stream.rng.random() < add_rule_ratio
        return GeneratedCase(
            id=_case_id(stream),
            family="equation",
            task_name=task.name,
            inputs=[_fragment(spec, s) for spec, s in zip(specs, samples)],
            bound_values=bound,
            add_rule=add_rule,
            target=target,
            precision=precision,
            seed=stream.case_seed,
            attempt_count=attempt,
        )
    raise GenerationExhausted(
        f"{task.name}: no valid sample after {MAX_ATTEMPTS} attempts"
    )


def score_selections(task: ScaleTask, selections: dict[str, list[str]]) -> int:
    """Total score for explicit per-item label selections."""
    total = 0
    for item in task.items:
        scores = dict(item.options)
        for label in selections.get(item.title, []):
            total += scores[label]
    return total


def gen_scale_case(
    task: ScaleTask,
    stream: SeededStream,
    add_rule_ratio: float,
) -> GeneratedCase:
    rng = stream.rng
    fragments: list[str] = []
    selections: dict[str, list[str]] = {}
    for item in task.items:
        if item.mode == "single":
            chosen = [item.options[rng.randrange(len(item.options))]]
        else:
            k = rng.randint(1, len(item.options))
            picks = sorted(rng.sample(range(len(item.options)), k))
            chosen = [item.options[i] for i in picks]
        labels = [label for label, _ in chosen]
        selections[item.title] = labels
        fragments.append(f"{item.title}: {'; '.join(labels)}")
    total = score_selections(task, selections)
    add_rule = rng.random() < add_rule_ratio
    return GeneratedCase(
        id=_case_id(stream),
        family="scale",
        task_name=task.name,
        inputs=fragments,
        bound_values=selections,
        add_rule=add_rule,
        target=str(total),
        precision=None,
        seed=stream.case_seed,
        attempt_count=1,
    )


def gen_case(catalog: TaskCatalog, stream: SeededStream, add_rule_ratio: float) -> GeneratedCase:
    """Uniform family choice, then uniform task choice within the family."""
    if not catalog.equations or not catalog.scales:
        missing = "equation" if not catalog.equations else "scale"
        raise EmptyCatalogFamily(f"catalog has no {missing} tasks")
    rng = stream.rng
    family = "equation" if rng.randrange(2) == 0 else "scale"
    if family == "equation":
        names = list(catalog.equations)
        task = catalog.equations[names[rng.randrange(len(names))]]
        return gen_equation_case(task, catalog, stream, add_rule_ratio)
    names = list(catalog.scales)
    scale = catalog.scales[names[rng.randrange(len(names))]]
    return gen_scale_case(scale, stream, add_rule_ratio)


def gen_task_case(
    catalog: TaskCatalog,
    task_name: str,
    stream: SeededStream,
    add_rule_ratio: float,
) -> GeneratedCase:
    """Generate for one named task (CLI --task, service task filter)."""
    if task_name in catalog.equations:
        return gen_equation_case(catalog.equations[task_name], catalog, stream, add_rule_ratio)
    if task_name in catalog.scales:
        return gen_scale_case(catalog.scales[task_name], stream, add_rule_ratio)
    raise KeyError(f"unknown task {task_name!r}")
