import pytest

from medcalc.dataset import DatasetError, export_dataset, read_dataset, write_dataset
from medcalc.evalrun import (
    EndpointConfig,
    EvalReport,
    Transcript,
    load_report,
    run_eval,
    save_report,
    summarize,
)
from medcalc.grading import Verdict

from stubserver import base_url, start_stub


@pytest.fixture()
def stub_server():
    server = start_stub()
    yield server
    server.shutdown()


def _endpoint(server, **kw) -> EndpointConfig:
    return EndpointConfig(base_url=base_url(server), model="stub", timeout=10.0, **kw)


@pytest.fixture()
def dataset(golden_catalog, tmp_path):
    path = tmp_path / "eval.jsonl"
    write_dataset(path, export_dataset(golden_catalog, count=24, seed=5))
    return path


def test_oracle_stub_scores_full_accuracy(dataset, stub_server, golden_catalog):
    targets = {row["prompt"]: row["target"] for row in read_dataset(dataset)}
    stub_server.reply = lambda prompt: f"working…\n\\boxed{{x: {targets[prompt]}}}"
    stub_server.jitter = True
    report = run_eval(dataset, _endpoint(stub_server, parallel=8), golden_catalog)
    assert report.accuracy() == 1.0
    assert report.no_answer_rate() == 0.0


def test_non_numeric_stub_scores_zero(dataset, stub_server, golden_catalog):
    stub_server.reply = lambda prompt: "\\boxed{x: !}"
    report = run_eval(dataset, _endpoint(stub_server), golden_catalog)
    assert report.accuracy() == 0.0
    assert all(t.verdict.outcome == "unparseable" for t in report.transcripts)


def test_parallel_execution_keeps_dataset_order(dataset, stub_server, golden_catalog):
    stub_server.jitter = True
    report = run_eval(dataset, _endpoint(stub_server, parallel=8), golden_catalog)
    expected = [row["id"] for row in read_dataset(dataset)]
    assert [t.case_id for t in report.transcripts] == expected
    assert report.case_count == len(expected)


def test_two_runs_identical_reports(dataset, stub_server, golden_catalog):
    endpoint = _endpoint(stub_server, parallel=4)
    a = run_eval(dataset, endpoint, golden_catalog)
    b = run_eval(dataset, endpoint, golden_catalog)
    assert a.to_dict() == b.to_dict()


def test_unreachable_endpoint_yields_failure_markers(dataset, golden_catalog):
    endpoint = EndpointConfig(
        base_url="http://127.0.0.1:9", model="stub", timeout=0.2, retries=0, parallel=2
    )
    report = run_eval(dataset, endpoint, golden_catalog)
    assert report.case_count == 24
    assert all(t.verdict.outcome == "no_answer" for t in report.transcripts)
    assert all("endpoint failure" in t.verdict.detail for t in report.transcripts)
    assert all(t.error for t in report.transcripts)


def test_empty_dataset_raises(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    with pytest.raises(DatasetError):
        run_eval(path, EndpointConfig(base_url="http://x", model="m"))


def test_endpoint_config_validation():
    with pytest.raises(ValueError):
        EndpointConfig(base_url="http://x", model="m", parallel=0)
    with pytest.raises(ValueError):
        EndpointConfig(base_url="http://x", model="m", timeout=0)


def _report_with(rewards_by_case) -> EvalReport:
    report = EvalReport(model="m", base_url="u")
    for i, (family, category, outcome, reward) in enumerate(rewards_by_case):
        report.transcripts.append(
            Transcript(
                case_id=f"c{i}",
                task_name=f"t{i}",
                family=family,
                category=category,
                prompt="p",
                response="r",
                verdict=Verdict("x", reward, outcome, "d"),
            )
        )
    return report


def test_summarize_percentages():
    report = _report_with(
        [
            ("equation", "A", "exact_match", 1),
            ("equation", "A", "mismatch", 0),
            ("equation", "B", "tolerant_match", 1),
            ("scale", "B", "mismatch", 0),
            ("scale", "C", "no_answer", 0),
        ]
    )
    text = summarize(report)
    assert "overall accuracy: 40.0" in text
    assert "no_answer rate: 20.0" in text
    # per-category counts conserved
    per_cat = report.per_category()
    assert sum(n for n, _ in per_cat.values()) == report.case_count


def test_summarize_all_no_answer():
    report = _report_with([("scale", "A", "no_answer", 0)] * 4)
    assert "no_answer rate: 100.0" in summarize(report)


def test_report_round_trip_and_stable_summary(dataset, stub_server, golden_catalog, tmp_path):
    report = run_eval(dataset, _endpoint(stub_server), golden_catalog)
    path = tmp_path / "report.json"
    save_report(report, path)
    loaded = load_report(path)
    assert summarize(loaded) == summarize(report)
    assert loaded.to_dict() == report.to_dict()


def test_categories_resolved_from_catalog(dataset, stub_server, golden_catalog):
    report = run_eval(dataset, _endpoint(stub_server), golden_catalog)
    known = {"Nutritional Diseases", "Laboratory Medicine", "Nephrology",
             "Pulmonary Diseases", "Neurological Diseases"}
    assert {t.category for t in report.transcripts} <= known
    report_nocat = run_eval(dataset, _endpoint(stub_server), None)
    assert {t.category for t in report_nocat.transcripts} == {"unknown"}
