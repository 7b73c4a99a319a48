"""Evaluation harness for chat-completion endpoints.

Sends every dataset case exactly once (bounded parallelism, per-request
timeout and retry budget), grades responses with the verifier, and keeps the
full transcript so error labeling stays possible afterwards. Report order is
case-index order regardless of completion order.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import httpx

from .catalog import TaskCatalog
from .dataset import DatasetError, read_dataset
from .grading import Verdict, grade_answer


@dataclass
class EndpointConfig:
    base_url: str
    model: str
    auth_env: str = "MEDCALC_API_KEY"
    temperature: float = 0.0
    max_tokens: int = 2048
    timeout: float = 60.0
    parallel: int = 4
    retries: int = 2

    def __post_init__(self):
        if self.parallel < 1:
            raise ValueError(f"parallel must be >= 1, got {self.parallel}")
        if self.timeout <= 0:
            raise ValueError(f"timeout must be > 0, got {self.timeout}")


@dataclass
class Transcript:
    case_id: str
    task_name: str
    family: str
    category: str
    prompt: str
    response: str
    verdict: Verdict
    error: str = ""


@dataclass
class EvalReport:
    model: str
    base_url: str
    transcripts: list[Transcript] = field(default_factory=list)

    @property
    def case_count(self) -> int:
        return len(self.transcripts)

    def accuracy(self) -> float:
        if not self.transcripts:
            return 0.0
        return sum(t.verdict.reward for t in self.transcripts) / len(self.transcripts)

    def no_answer_rate(self) -> float:
        if not self.transcripts:
            return 0.0
        misses = sum(1 for t in self.transcripts if t.verdict.outcome == "no_answer")
        return misses / len(self.transcripts)

    def _grouped(self, key) -> dict[str, tuple[int, int]]:
        groups: dict[str, list[int]] = {}
        for t in self.transcripts:
            groups.setdefault(key(t), []).append(t.verdict.reward)
        return {k: (len(v), sum(v)) for k, v in groups.items()}

    def per_family(self) -> dict[str, tuple[int, int]]:
        return self._grouped(lambda t: t.family)

    def per_category(self) -> dict[str, tuple[int, int]]:
        return self._grouped(lambda t: t.category)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "base_url": self.base_url,
            "transcripts": [
                {**asdict(t), "verdict": asdict(t.verdict)} for t in self.transcripts
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        report = cls(model=data["model"], base_url=data["base_url"])
        for t in data["transcripts"]:
            verdict = Verdict(**t["verdict"])
            report.transcripts.append(
                Transcript(
                    case_id=t["case_id"],
                    task_name=t["task_name"],
                    family=t["family"],
                    category=t["category"],
                    prompt=t["prompt"],
                    response=t["response"],
                    verdict=verdict,
                    error=t.get("error", ""),
                )
            )
        return report


def _chat_once(client: httpx.Client, endpoint: EndpointConfig, prompt: str, headers: dict) -> str:
    resp = client.post(
        endpoint.base_url.rstrip("/") + "/chat/completions",
        json={
            "model": endpoint.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": endpoint.temperature,
            "max_tokens": endpoint.max_tokens,
        },
        headers=headers,
        timeout=endpoint.timeout,
    )
    resp.raise_for_status()
    return resp.json()["choices"][0]["message"]["content"]


def _chat(client: httpx.Client, endpoint: EndpointConfig, prompt: str, headers: dict) -> tuple[str, str]:
    """Returns (response_text, error); error non-empty after the retry budget."""
    last = ""
    for attempt in range(endpoint.retries + 1):
        try:
            return _chat_once(client, endpoint, prompt, headers), ""
        except (httpx.HTTPError, KeyError, ValueError) as exc:
            last = f"{type(exc).__name__}: {exc}"
            if attempt < endpoint.retries:
                time.sleep(0.2 * (attempt + 1))
    return "", last


def run_eval(
    dataset_path: str | Path,
    endpoint: EndpointConfig,
    catalog: TaskCatalog | None = None,
) -> EvalReport:
    rows = read_dataset(dataset_path)  # raises DatasetError on empty/bad input

    categories: dict[str, str] = {}
    if catalog is not None:
        for name, task in catalog.equations.items():
            categories[name] = task.category
        for name, scale in catalog.scales.items():
            categories[name] = scale.category

    headers = {}
    token = os.environ.get(endpoint.auth_env, "")
    if token:
        headers["Authorization"] = f"Bearer {token}"

    report = EvalReport(model=endpoint.model, base_url=endpoint.base_url)
    with httpx.Client() as client:

        def one(row: dict) -> Transcript:
            response, error = _chat(client, endpoint, row["prompt"], headers)
            if error:
                verdict = Verdict(None, 0, "no_answer", f"endpoint failure: {error}")
            else:
                verdict = grade_answer(row["family"], str(row["target"]), response)
            return Transcript(
                case_id=row["id"],
                task_name=row["task_name"],
                family=row["family"],
                category=categories.get(row["task_name"], "unknown"),
                prompt=row["prompt"],
                response=response,
                verdict=verdict,
                error=error,
            )

        with ThreadPoolExecutor(max_workers=endpoint.parallel) as pool:
            report.transcripts = list(pool.map(one, rows))  # keeps dataset order
    return report


def _pct(value: float) -> str:
    return f"{100.0 * value:.1f}"


def summarize(report: EvalReport) -> str:
    """Plain-text table: overall and per-family/category accuracy, 1 dp."""
    lines = [
        f"model: {report.model}",
        f"cases: {report.case_count}",
        f"overall accuracy: {_pct(report.accuracy())}",
        f"no_answer rate: {_pct(report.no_answer_rate())}",
        "",
        f"{'family':<12} {'cases':>6} {'accuracy':>9}",
    ]
    families = report.per_family()
    for family in ("equation", "scale"):
        if family in families:
            n, correct = families[family]
            lines.append(f"{family:<12} {n:>6} {_pct(correct / n):>9}")
    lines.append("")
    categories = report.per_category()
    width = max([len(c) for c in categories] + [8])
    lines.append(f"{'category':<{width}} {'cases':>6} {'accuracy':>9}")
    for category in sorted(categories):
        n, correct = categories[category]
        lines.append(f"{category:<{width}} {n:>6} {_pct(correct / n):>9}")
    return "\n".join(lines) + "\n"


def save_report(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(json.dumps(report.to_dict(), ensure_ascii=False, indent=2), encoding="utf-8")


def load_report(path: str | Path) -> EvalReport:
    return EvalReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


__all__ = [
    "DatasetError",
    "EndpointConfig",
    "EvalReport",
    "Transcript",
    "load_report",
    "run_eval",
    "save_report",
    "summarize",
]
