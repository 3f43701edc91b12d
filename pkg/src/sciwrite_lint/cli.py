"""Command-line entry points.

Exit codes: 0 clean, 1 errors found, 2 warnings only (configurable via
fail_on_warnings), 3 usage or environment failure.
"""

import json
import sys
from pathlib import Path

import click

from sciwrite_lint import __version__, evalharness, pipeline, render
from sciwrite_lint.config import ConfigError, load_config
from sciwrite_lint.pipeline import InputError
from sciwrite_lint.signals import SignalsError

EXIT_USAGE = 3

_FORMAT = click.Choice(["terminal", "structured"])


@click.group()
@click.version_option(version=__version__, prog_name="sciwrite-lint")
def main():
    """Bibliography and cross-reference linter for scientific manuscripts."""


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_USAGE)


@main.command()
@click.argument("tex_main", type=click.Path())
@click.option("--bib", type=click.Path(), default=None, help="Bibliography file; discovered from \\bibliography when omitted.")
@click.option("--offline", is_flag=True, help="Use recorded fixtures instead of the network.")
@click.option("--signals", "signals_path", type=click.Path(), default=None, help="JSON file with external per-reference and contribution signals.")
@click.option("--format", "output_format", type=_FORMAT, default="terminal", show_default=True)
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file; nearest .sciwrite-lint.toml is discovered when omitted.")
@click.option("--pdf-manifest", "pdf_manifest_path", type=click.Path(), default=None, help="JSON map of bib key to local PDF path (enables the full-text tier).")
def check(tex_main, bib, offline, signals_path, output_format, config_path, pdf_manifest_path):
    """Check TEX_MAIN and its bibliography."""
    main_path = Path(tex_main)
    try:
        if main_path.suffix != ".tex":
            raise InputError(f"expected a .tex manuscript, got {main_path}")
        if bib is not None and Path(bib).suffix != ".bib":
            raise InputError(f"expected a .bib bibliography, got {bib}")
        config = load_config(
            path=config_path,
            start_dir=main_path.parent if config_path is None else None,
        )
        signals_data = None
        if signals_path is not None:
            try:
                with open(signals_path, encoding="utf-8") as handle:
                    signals_data = json.load(handle)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot load signals from {signals_path}: {exc}") from exc
        pdf_manifest = None
        if pdf_manifest_path is not None:
            pdf_manifest = pipeline.load_pdf_manifest(pdf_manifest_path)
        result = pipeline.run_check(
            main_path,
            bib=bib,
            config=config,
            signals=signals_data,
            offline=offline,
            pdf_manifest=pdf_manifest,
        )
    except (InputError, ConfigError, SignalsError) as exc:
        _fail(str(exc))
    if output_format == "structured":
        output = render.render_structured(result.findings, result.report, result.references)
    else:
        output = render.render_terminal(result.findings, result.report)
    click.echo(output, nl=False)
    sys.exit(result.exit_code)


@main.group(name="eval")
def eval_group():
    """Evaluation harness: injection recall and matching degradation."""


@eval_group.command(name="inject")
@click.option("--docs", default=20, show_default=True, help="Number of generated fixture documents.")
@click.option("--per-doc", default=10, show_default=True, help="Errors injected per document.")
@click.option("--seed", default=0, show_default=True)
@click.option("--format", "output_format", type=_FORMAT, default="terminal", show_default=True)
def eval_inject(docs, per_doc, seed, output_format):
    """Inject fake citations and broken references, then measure recall."""
    if docs < 1 or per_doc < 0:
        _fail("--docs must be >= 1 and --per-doc >= 0")
    report = evalharness.run_injection_eval(n_docs=docs, n_per_doc=per_doc, seed=seed)
    if output_format == "structured":
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return
    click.echo(f"injected: {report.total}  detected: {report.detected}  false positives: {report.false_positives}")
    for kind, stats in sorted(report.per_kind.items()):
        click.echo(f"  {kind:<12} {stats['detected']}/{stats['total']}")
    recall = "n/a" if report.recall is None else f"{report.recall:.3f}"
    precision = "n/a" if report.precision is None else f"{report.precision:.3f}"
    click.echo(f"recall: {recall}  precision: {precision}")


@eval_group.command(name="matching")
@click.option("--fixtures", "fixtures_path", type=click.Path(), default=None, help="Fixture JSON of true records and decoys; generated when omitted.")
@click.option("--seed", default=0, show_default=True)
@click.option("--format", "output_format", type=_FORMAT, default="terminal", show_default=True)
def eval_matching(fixtures_path, seed, output_format):
    """Run the degradation scenarios against decoy-laden candidate sets."""
    try:
        if fixtures_path is not None:
            fixtures = evalharness.load_fixtures(fixtures_path)
        else:
            fixtures = evalharness.generate_matching_fixtures()
    except (OSError, ValueError, KeyError) as exc:
        _fail(f"cannot load fixtures: {exc}")
    results = evalharness.run_matching_benchmark(fixtures, seed=seed)
    if output_format == "structured":
        click.echo(json.dumps([r.to_dict() for r in results], indent=2, sort_keys=True))
        return
    click.echo(f"{'scenario':<24} {'correct':>9}  {'mean composite':>14}")
    for result in results:
        click.echo(
            f"{result.scenario:<24} {result.successes:>4}/{result.total:<4} "
            f"{result.mean_composite:>14.3f}"
        )
    passed = sum(1 for r in results if r.successes == r.total)
    click.echo(f"scenarios fully correct: {passed}/{len(results)}")


if __name__ == "__main__":
    main()
