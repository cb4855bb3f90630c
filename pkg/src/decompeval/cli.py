"""Command-line entry point: run the evaluation matrix, aggregate reports,
run the Multi-DC fallback, and expose the hermetic stub tools.

Exit codes: 0 success, 1 evaluation produced failures-by-design (for
example --fail-on-deceptive), 2 usage or configuration error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import multidc as multidc_mod
from . import report as report_mod
from . import stubs
from .config import ConfigError, RunConfig
from .pipeline import (
    CaseKey,
    OutcomeCategory,
    VersionMismatch,
    enumerate_cases,
    evaluate_matrix,
    resultset_load,
)


@click.group()
def main():
    """Differential-testing harness for Java bytecode decompilers."""


def _load_config(config_path) -> RunConfig:
    try:
        return RunConfig.load(config_path)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)


def _apply_filters(cases, projects, compilers, decompilers, units):
    """Filters compose as intersections; empty filter means no restriction."""
    if projects:
        cases = [k for k in cases if k.project in projects]
    if compilers:
        cases = [k for k in cases if k.compiler in compilers]
    if decompilers:
        cases = [k for k in cases if k.decompiler in decompilers]
    if units:
        cases = [k for k in cases if k.unit in units]
    return cases


@main.command()
@click.argument("config_path", type=click.Path())
@click.option("--project", "projects", multiple=True, help="Restrict to a project id.")
@click.option("--compiler", "compilers", multiple=True, help="Restrict to a compiler id.")
@click.option("--decompiler", "decompilers", multiple=True, help="Restrict to a decompiler id.")
@click.option("--unit", "units", multiple=True, help="Restrict to a source unit path.")
@click.option("--workers", type=int, default=None, help="Worker pool size override.")
@click.option("--force-tests", is_flag=True, help="Run tests even for strictly equivalent cases.")
@click.option("--fail-on-deceptive", is_flag=True,
              help="Exit 1 if any case is classified Deceptive.")
@click.option("--results", "results_name", default="results.jsonl", show_default=True,
              help="Results file name under the output root.")
@click.option("--quiet", is_flag=True, help="Suppress per-case progress output.")
@click.option("--json-progress", is_flag=True,
              help="Emit one JSON object per completed case on stdout.")
def run(config_path, projects, compilers, decompilers, units, workers,
        force_tests, fail_on_deceptive, results_name, quiet, json_progress):
    """Evaluate the full (or filtered) case matrix from a config file."""
    config = _load_config(config_path)
    ctx = config.to_run_context()
    if force_tests:
        ctx.force_tests = True
    cases = enumerate_cases(config.projects, config.compilers(),
                            config.decompilers())
    cases = _apply_filters(cases, set(projects), set(compilers),
                           set(decompilers), set(units))

    def progress(key, result, err):
        if json_progress:
            payload = {"key": key.to_dict()}
            if err is not None:
                payload["error"] = err
            else:
                payload["category"] = result.category.value
            click.echo(json.dumps(payload, sort_keys=True))
        elif not quiet:
            label = result.category.value if result else f"error: {err}"
            click.echo(f"{key.project}/{key.unit} [{key.compiler} x "
                       f"{key.decompiler}] -> {label}")

    results_path = ctx.run_root / results_name
    try:
        results = evaluate_matrix(
            ctx, config.compilers(), config.decompilers(),
            parallelism=workers if workers is not None else config.workers,
            results_path=results_path, cases=cases, progress=progress)
    except VersionMismatch as exc:
        click.echo(f"refusing to append: {exc}", err=True)
        sys.exit(2)

    if not quiet and not json_progress:
        click.echo(f"{len(results.results)} cases -> {results_path}")
    if results.errors:
        for key, message in results.errors:
            click.echo(f"infrastructure error: {key.project}/{key.unit}: {message}",
                       err=True)
        sys.exit(1)
    if fail_on_deceptive and any(
            r.category is OutcomeCategory.DECEPTIVE for r in results.results):
        click.echo("deceptive decompilations found", err=True)
        sys.exit(1)
    sys.exit(0)


@main.command()
@click.argument("results_path", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "markdown"]),
              default="markdown", show_default=True)
@click.option("--chisq", is_flag=True, help="Also compute compiler-effect chi-squared per decompiler.")
@click.option("--partition", is_flag=True, help="Also compute the coverage partition.")
@click.option("--deceptive", is_flag=True, help="Also attribute deceptive cases per compiler.")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory to write report files into (default: stdout only).")
def report(results_path, fmt, chisq, partition, deceptive, out_dir):
    """Aggregate a results file into summary tables and analyses."""
    results_path = Path(results_path)
    if not results_path.is_file():
        click.echo(f"no such results file: {results_path}", err=True)
        sys.exit(2)
    results = resultset_load(results_path)
    rows = report_mod.aggregate(results)
    summary = report_mod.emit_summary(rows, fmt)
    click.echo(summary, nl=False)

    extras = {}
    if chisq:
        chi = {}
        for row in rows:
            try:
                chi[row.decompiler] = report_mod.chi_squared_compiler_effect(
                    results, row.decompiler).to_dict()
            except report_mod.DegenerateTable as exc:
                chi[row.decompiler] = {"degenerate": str(exc)}
                click.echo(f"warning: chi-squared degenerate for "
                           f"{row.decompiler}: {exc}", err=True)
        extras["chisq.json"] = chi
    if partition:
        extras["partition.json"] = report_mod.coverage_partition(results).to_dict()
    if deceptive:
        extras["deceptive.json"] = report_mod.deceptive_attribution(results)

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        suffix = {"csv": "csv", "json": "json", "markdown": "md"}[fmt]
        (out_dir / f"summary.{suffix}").write_text(summary)
        for name, payload in extras.items():
            (out_dir / name).write_text(json.dumps(payload, indent=2) + "\n")
    elif extras:
        for name, payload in extras.items():
            click.echo(json.dumps({name: payload}, indent=2))
    sys.exit(0)


@main.command("multidc")
@click.argument("config_path", type=click.Path())
@click.option("--from-results", "ranking_results", type=click.Path(),
              help="Rank decompilers from a prior results file.")
@click.option("--ranking", "explicit", default=None,
              help="Comma-separated explicit decompiler order.")
@click.option("--compiler", "compilers", multiple=True,
              help="Restrict to a compiler id.")
@click.option("--fallback-on-tests", is_flag=True,
              help="Keep falling back until a result also passes tests.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Provenance manifest path (default: <output_root>/multidc.json).")
def multidc(config_path, ranking_results, explicit, compilers,
            fallback_on_tests, out_path):
    """Run the Multi-DC meta-decompiler over every unit."""
    config = _load_config(config_path)
    if bool(ranking_results) == bool(explicit):
        click.echo("specify exactly one of --from-results / --ranking", err=True)
        sys.exit(2)
    if explicit is not None:
        order = [d.strip() for d in explicit.split(",") if d.strip()]
        if not order:
            click.echo("empty ranking", err=True)
            sys.exit(2)
        ranking = multidc_mod.explicit_ranking(order)
    else:
        try:
            ranking = multidc_mod.rank_decompilers(
                resultset_load(Path(ranking_results)))
        except multidc_mod.EmptyResultSet as exc:
            click.echo(str(exc), err=True)
            sys.exit(2)

    ctx = config.to_run_context()
    selected_compilers = list(compilers) or config.compilers()
    manifest = {"ranking": list(ranking.order), "provenance": ranking.provenance,
                "units": []}
    for project in config.projects:
        for unit in project.units:
            for compiler in selected_compilers:
                outcome = multidc_mod.multi_decompile(
                    project.id, unit, compiler, ranking, ctx,
                    fallback_on_tests=fallback_on_tests)
                manifest["units"].append({
                    "project": project.id, "unit": unit, "compiler": compiler,
                    "chosen": outcome.chosen,
                    "attempted": list(outcome.attempted),
                    "category": outcome.result.category.value,
                })
    out_path = (Path(out_path) if out_path is not None
                else ctx.run_root / "multidc.json")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(manifest, indent=2) + "\n")
    click.echo(f"{len(manifest['units'])} units -> {out_path}")
    sys.exit(0)


@main.group()
def stub():
    """Hermetic stand-ins for compilers, decompilers and the test runner."""


@stub.command("compile-copy")
@click.option("--manifest", "manifest_path", required=True, type=click.Path())
@click.option("--flavor", required=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.argument("sources", nargs=-1, required=True, type=click.Path())
def stub_compile_copy(manifest_path, flavor, out_dir, sources):
    manifest = stubs.load_manifest(manifest_path)
    sys.exit(stubs.stub_compile_copy(manifest, flavor, sources, out_dir))


@stub.command("decomp-identity")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--source", required=True, type=click.Path())
@click.argument("classes", nargs=-1, type=click.Path())
def stub_decomp_identity(out_dir, source, classes):
    sys.exit(stubs.stub_decomp_identity(source, out_dir))


@stub.command("decomp-mutant")
@click.option("--manifest", "manifest_path", required=True, type=click.Path())
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--source", required=True, type=click.Path())
@click.argument("classes", nargs=-1, type=click.Path())
def stub_decomp_mutant(manifest_path, out_dir, source, classes):
    manifest = stubs.load_manifest(manifest_path)
    sys.exit(stubs.stub_decomp_mutant(manifest, source, out_dir))


@stub.command("decomp-crash")
@click.option("--out", "out_dir", required=False, type=click.Path())
@click.option("--source", required=False, type=click.Path())
@click.argument("classes", nargs=-1, type=click.Path())
def stub_decomp_crash(out_dir, source, classes):
    sys.exit(stubs.stub_decomp_crash(source or "(unknown)"))


@stub.command("decomp-syntaxbreak")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--source", required=True, type=click.Path())
@click.argument("classes", nargs=-1, type=click.Path())
def stub_decomp_syntaxbreak(out_dir, source, classes):
    sys.exit(stubs.stub_decomp_syntaxbreak(source, out_dir))


@stub.command("testrunner")
@click.option("--manifest", "manifest_path", required=True, type=click.Path())
@click.option("--classes", "classes_dir", required=True, type=click.Path())
@click.option("--sleep", type=float, default=0.0,
              help="Artificial delay before reporting (timeout testing).")
@click.argument("tests", nargs=-1, required=True)
def stub_testrunner(manifest_path, classes_dir, sleep, tests):
    manifest = stubs.load_manifest(manifest_path)
    sys.exit(stubs.stub_testrunner(manifest, classes_dir, tests, sleep=sleep))


@main.command("verify-fixtures")
@click.argument("fixtures_root", type=click.Path())
@click.option("--jdk", "jdk_home", type=click.Path(), default=None,
              help="JDK home to use (default: $JAVA_HOME or javac on PATH).")
def verify_fixtures(fixtures_root, jdk_home):
    """Recompile the fixture corpus with a real JDK and re-check invariants."""
    from .fixtures import fixture_verify

    report_lines, ok = fixture_verify(Path(fixtures_root), jdk_home=jdk_home)
    for line in report_lines:
        click.echo(line)
    sys.exit(0 if ok else 1)
