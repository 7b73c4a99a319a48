"""Answer extraction and binary-reward grading.

The last balanced \\boxed{...} span wins; the text after its final colon
(ASCII or fullwidth) is the declared answer. Scale answers need exact numeric
equality; equation answers get a ±1% relative tolerance. Non-numeric
extractions fall back to trimmed string equality with the target.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

REWARD_OUTCOMES = ("exact_match", "tolerant_match")

_BOXED = "\\boxed"
_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)")
_UNIT_START = re.compile(r"[A-Za-z%µμ°]")


@dataclass
class Verdict:
    extracted: str | None
    reward: int  # 1 iff outcome is exact_match or tolerant_match
    outcome: str  # exact_match | tolerant_match | mismatch | no_answer | unparseable
    detail: str


def _last_boxed_span(response: str) -> str | None:
    starts = [m.start() for m in re.finditer(re.escape(_BOXED), response)]
    for start in reversed(starts):
        i = start + len(_BOXED)
        while i < len(response) and response[i].isspace():
            i += 1
        if i >= len(response) or response[i] != "{":
            continue
        depth = 1
        i += 1
        begin = i
        while i < len(response):
            ch = response[i]
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    return response[begin:i]
            i += 1
    return None


def _split_label(content: str) -> tuple[str | None, str]:
    cut = max(content.rfind(":"), content.rfind("："))
    if cut == -1:
        return None, content.strip()
    return content[:cut].strip(), content[cut + 1 :].strip()


def extract_answer(response: str) -> str | None:
    """Answer text from the last boxed span, or None when no span exists."""
    content = _last_boxed_span(response)
    if content is None:
        return None
    return _split_label(content)[1]


def parse_answer_number(text: str) -> float | None:
    """Optional sign, decimal point, optional trailing unit token; None otherwise."""
    s = text.strip()
    m = _NUMBER.match(s)
    if not m:
        return None
    rest = s[m.end() :].strip()
    if rest and not _UNIT_START.match(rest):
        return None
    return float(m.group())


def grade_answer(family: str, target: str, response: str) -> Verdict:
    content = _last_boxed_span(response)
    if content is None:
        return Verdict(None, 0, "no_answer", "no \\boxed{...} span in response")
    label, answer = _split_label(content)
    prefix = f"label={label!r} " if label is not None else ""

    pred = parse_answer_number(answer)
    gt = parse_answer_number(target)
    if pred is None or gt is None:
        # non-numeric fallback: trimmed string equality
        if answer == target.strip():
            return Verdict(answer, 1, "exact_match", prefix + "matched target text")
        return Verdict(
            answer, 0, "unparseable", prefix + f"{answer!r} is not numeric and != {target!r}"
        )

    if pred == gt:
        return Verdict(answer, 1, "exact_match", prefix + f"{pred} == {gt}")
    if family == "equation":
        within = abs(pred - gt) <= 0.01 * abs(gt) if gt != 0 else abs(pred) <= 1e-9
        if within:
            return Verdict(
                answer, 1, "tolerant_match", prefix + f"|{pred} - {gt}| within 1% tolerance"
            )
    return Verdict(answer, 0, "mismatch", prefix + f"{pred} != {gt}")


def grade(case, response: str) -> Verdict:
    """Grade a model response against a generated case's target."""
    return grade_answer(case.family, case.target, response)
