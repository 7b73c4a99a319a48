import pytest
from hypothesis import given, strategies as st

from medcalc.generate import gen_case
from medcalc.grading import Verdict, extract_answer, grade, grade_answer, parse_answer_number
from medcalc.seeding import SeededStream

# a multi-step response in the style the graded models produce: several colons
# and an unlabeled final box
CURB_STYLE_RESPONSE = (
    "Checking each criterion: impaired consciousness 1, urea 1, respiratory rate 0, "
    "blood pressure 1, age 0. Sum: 1 + 1 + 0 + 1 + 0 = 3.\n\n"
    "Final answer:\n\\(\\boxed{3}\\)"
)


@pytest.mark.parametrize(
    "response,expected",
    [
        ("the result \\boxed{BMI: 20.5}", "20.5"),
        ("\\boxed{BMI： 20.5}", "20.5"),  # fullwidth colon
        ("Final answer: \\boxed{3}", "3"),
        ("\\boxed{Osmol: 3607.4}", "3607.4"),
        ("\\boxed{a: 1} then \\boxed{b: 2}", "2"),  # last span wins
        ("\\boxed{label one: label two: 7}", "7"),  # final colon wins
        ("\\boxed{a{nested}b: 9}", "9"),  # balanced braces
        ("\\boxed  {spaced: 4}", "4"),
        ("\\boxed{42}", "42"),  # no colon: whole content
        ("the answer is 20.5", None),
        ("\\boxed{unclosed", None),
        ("", None),
    ],
)
def test_extract_answer(response, expected):
    assert extract_answer(response) == expected


@pytest.mark.parametrize(
    "text,expected",
    [
        ("20.5", 20.5),
        (" -3 ", -3.0),
        ("+2.5", 2.5),
        (".5", 0.5),
        ("20.5 kg/m2", 20.5),  # trailing unit stripped
        ("3607.4mOsm/kg", 3607.4),
        ("36.5 °C", 36.5),
        ("12 %", 12.0),
        ("3,607.4", None),  # embedded comma
        ("1-2", None),
        ("abc", None),
        ("", None),
        ("7 7", None),  # second number is not a unit
    ],
)
def test_parse_answer_number(text, expected):
    assert parse_answer_number(text) == expected


def test_curb65_style_response_grades_to_reward_one():
    verdict = grade_answer("scale", "3", CURB_STYLE_RESPONSE)
    assert verdict.reward == 1
    assert verdict.outcome == "exact_match"
    assert verdict.extracted == "3"


def test_osmol_exact_match():
    verdict = grade_answer("equation", "3607.4", "…\\boxed{Osmol: 3607.4}")
    assert (verdict.reward, verdict.outcome) == (1, "exact_match")


def test_equation_tolerance_band():
    verdict = grade_answer("equation", "100.0", "\\boxed{x: 100.9}")
    assert (verdict.reward, verdict.outcome) == (1, "tolerant_match")
    verdict = grade_answer("equation", "100.0", "\\boxed{x: 101.1}")
    assert (verdict.reward, verdict.outcome) == (0, "mismatch")


def test_scale_requires_exact_numeric_equality():
    assert grade_answer("scale", "3", "\\boxed{score: 2}").reward == 0
    assert grade_answer("scale", "3", "\\boxed{score: 3.01}").reward == 0
    assert grade_answer("scale", "3", "\\boxed{score: 3.0}").reward == 1  # numeric, not textual
    assert grade_answer("scale", "-2", "\\boxed{score: -2}").reward == 1


def test_no_answer():
    verdict = grade_answer("equation", "1.0", "no box here")
    assert (verdict.reward, verdict.outcome, verdict.extracted) == (0, "no_answer", None)


def test_non_numeric_fallback_string_equality():
    assert grade_answer("equation", "positive", "\\boxed{x: positive}").outcome == "exact_match"
    verdict = grade_answer("equation", "positive", "\\boxed{x: negative}")
    assert (verdict.reward, verdict.outcome) == (0, "unparseable")


def test_label_recorded_in_detail():
    verdict = grade_answer("equation", "20.5", "\\boxed{BMI: 20.5}")
    assert "'BMI'" in verdict.detail


def test_unit_suffix_stripped_before_compare():
    assert grade_answer("equation", "20.5", "\\boxed{BMI: 20.5 kg/m2}").reward == 1


def test_zero_target_tolerance():
    assert grade_answer("equation", "0.0", "\\boxed{x: 0}").reward == 1
    assert grade_answer("equation", "0.0", "\\boxed{x: 0.0000000001}").reward == 1
    assert grade_answer("equation", "0.0", "\\boxed{x: 0.1}").reward == 0


@given(st.floats(min_value=1.0001, max_value=1e9, allow_nan=False, allow_infinity=False))
def test_tolerance_band_boundaries(target):
    inside = repr(target * 1.005)
    outside = repr(target * 1.02)
    assert grade_answer("equation", repr(target), f"\\boxed{{x: {inside}}}").reward == 1
    assert grade_answer("equation", repr(target), f"\\boxed{{x: {outside}}}").reward == 0


def test_reward_iff_match_outcome(seed_catalog):
    responses = [
        "\\boxed{x: 1}",
        "\\boxed{x: }",
        "nothing",
        "\\boxed{x: banana}",
        "\\boxed{x： 2}",
    ]
    for i in range(80):
        case = gen_case(seed_catalog, SeededStream(41, i), 0.5)
        for response in responses + [f"\\boxed{{{case.task_name}: {case.target}}}"]:
            verdict = grade(case, response)
            assert (verdict.reward == 1) == (
                verdict.outcome in ("exact_match", "tolerant_match")
            )


def test_generator_verifier_closure_sample(seed_catalog):
    for i in range(300):
        case = gen_case(seed_catalog, SeededStream(43, i), 0.5)
        response = f"reasoning…\n\\boxed{{{case.task_name}: {case.target}}}"
        verdict = grade(case, response)
        assert verdict == Verdict(case.target, 1, "exact_match", verdict.detail)
