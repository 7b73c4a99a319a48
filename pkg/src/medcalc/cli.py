"""medcalc command-line interface.

MEDCALC_CATALOG selects the default catalog path; without it the packaged
seed catalog is used.
"""

from __future__ import annotations

import json
import os
import sys
from importlib import resources
from pathlib import Path

import click

from .catalog import (
    CatalogError,
    TaskCatalog,
    catalog_stats,
    load_catalog,
    load_catalog_file,
    parse_catalog,
    validate_catalog,
)
from .dataset import DEFAULT_ADD_RULE_RATIO, export_dataset, write_dataset
from .engine import BACKEND_NAME, FormulaError, evaluate, parse
from .evalrun import EndpointConfig, run_eval, save_report, summarize
from .grading import grade_answer


def seed_catalog_text() -> str:
    return resources.files("medcalc.data").joinpath("seed_catalog.json").read_text("utf-8")


def resolve_catalog(path: str | None) -> TaskCatalog:
    path = path or os.environ.get("MEDCALC_CATALOG")
    if path:
        return load_catalog_file(path)
    return load_catalog(seed_catalog_text())


@click.group()
def main():
    """Verifiable medical-calculation environment."""


@main.command("validate-config")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def validate_config(path):
    """Validate a catalog document; exit nonzero on any violation."""
    try:
        catalog = parse_catalog(Path(path).read_text(encoding="utf-8"))
    except CatalogError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(2)
    violations = validate_catalog(catalog)
    if violations:
        for v in violations:
            click.echo(f"{v.task}: [{v.rule}] {v.message}")
        sys.exit(1)
    stats = catalog_stats(catalog)
    click.echo(
        f"OK: {stats.families['equation']} equations, {stats.families['scale']} scales, "
        f"{stats.indicator_count} indicators"
    )


@main.group("expr")
def expr_group():
    """Formula engine utilities."""


@expr_group.command("eval")
@click.argument("formula")
@click.option("--bind", "-b", "binds", multiple=True, metavar="NAME=VALUE", help="Variable binding; repeatable.")
def expr_eval(formula, binds):
    """Evaluate FORMULA over the given bindings (oracle cross-checks)."""
    bindings = {}
    for bind in binds:
        name, _, value = bind.partition("=")
        if not _:
            raise click.BadParameter(f"expected NAME=VALUE, got {bind!r}", param_hint="--bind")
        bindings[name.strip()] = float(value)
    try:
        result = evaluate(parse(formula), bindings, formula)
    except FormulaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(repr(result))


@main.command("stats")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
def stats_cmd(catalog_path):
    """Catalog statistics: family/category counts and indicator usage."""
    stats = catalog_stats(resolve_catalog(catalog_path))
    click.echo(json.dumps(stats.to_dict(), ensure_ascii=False, indent=2))


def _export(catalog_path, count, seed, rule_ratio, task, out):
    catalog = resolve_catalog(catalog_path)
    text = export_dataset(catalog, count, seed, rule_ratio, task)
    if out == "-":
        click.echo(text, nl=False)
    else:
        write_dataset(out, text)
        click.echo(f"wrote {count} cases to {out}", err=True)


@main.command("gen")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=10, show_default=True)
@click.option("--task", default=None, help="Generate only this task.")
@click.option("--rule-ratio", type=float, default=DEFAULT_ADD_RULE_RATIO, show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--out", "-o", default="-", help="Output file; '-' for stdout.")
def gen_cmd(seed, count, task, rule_ratio, catalog_path, out):
    """Generate cases as JSONL (see docs/dataset-format.md)."""
    _export(catalog_path, count, seed, rule_ratio, task, out)


@main.command("export")
@click.option("--count", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--rule-ratio", type=float, default=DEFAULT_ADD_RULE_RATIO, show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--out", "-o", default="-", help="Output file; '-' for stdout.")
def export_cmd(count, seed, rule_ratio, catalog_path, out):
    """Export a training dataset; identical arguments give byte-identical output."""
    _export(catalog_path, count, seed, rule_ratio, None, out)


@main.command("verify")
@click.option("--case", "case_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="JSON file with a generated case or dataset row.")
@click.option("--response", "response_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="File with the model response text.")
def verify_cmd(case_path, response_path):
    """Grade a response against a case; exit 0 iff reward is 1."""
    case = json.loads(Path(case_path).read_text(encoding="utf-8"))
    response = Path(response_path).read_text(encoding="utf-8")
    verdict = grade_answer(case["family"], str(case["target"]), response)
    click.echo(f"extracted: {verdict.extracted}")
    click.echo(f"outcome: {verdict.outcome}")
    click.echo(f"reward: {verdict.reward}")
    click.echo(f"detail: {verdict.detail}")
    sys.exit(0 if verdict.reward == 1 else 1)


@main.command("serve")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Default seed when requests omit one.")
@click.option("--review-log", default="reviews.jsonl", show_default=True)
@click.option("--ui-dir", default=None, help="Static audit-console build to mount at /ui.")
def serve_cmd(catalog_path, host, port, seed, review_log, ui_dir):
    """Run the HTTP/JSON environment service."""
    import uvicorn

    from .reviews import ReviewLog
    from .service import create_app

    catalog = resolve_catalog(catalog_path)
    if ui_dir is None:
        ui_dir = os.environ.get("MEDCALC_UI_DIR") or ("frontend/dist" if Path("frontend/dist").is_dir() else None)
    app = create_app(catalog, ReviewLog(review_log), seed, ui_dir)
    click.echo(f"engine backend: {BACKEND_NAME}", err=True)
    uvicorn.run(app, host=host, port=port)


@main.command("eval")
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--base-url", required=True)
@click.option("--model", required=True)
@click.option("--parallel", type=int, default=4, show_default=True)
@click.option("--temperature", type=float, default=0.0, show_default=True)
@click.option("--max-tokens", type=int, default=2048, show_default=True)
@click.option("--timeout", type=float, default=60.0, show_default=True)
@click.option("--retries", type=int, default=2, show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--out", default="eval_report.json", show_default=True)
def eval_cmd(dataset, base_url, model, parallel, temperature, max_tokens, timeout, retries, catalog_path, out):
    """Evaluate a chat-completion endpoint over a dataset (auth: MEDCALC_API_KEY)."""
    endpoint = EndpointConfig(
        base_url=base_url,
        model=model,
        temperature=temperature,
        max_tokens=max_tokens,
        timeout=timeout,
        parallel=parallel,
        retries=retries,
    )
    report = run_eval(dataset, endpoint, resolve_catalog(catalog_path))
    save_report(report, out)
    click.echo(summarize(report), nl=False)
    click.echo(f"report written to {out}", err=True)


if __name__ == "__main__":
    main()
