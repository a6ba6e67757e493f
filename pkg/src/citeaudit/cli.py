"""Command-line front end: verify, classify, stats.

Exit codes: 0 everything verified, 1 hallucinations found, 2 unverifiable
results only, 3 usage or I/O errors.
"""
from __future__ import annotations

import configparser
import sys
from pathlib import Path

import click

from .analytics import CorpusError, load_corpus, render_summary, summarize
from .classify import ClassifierConfig, classify_batch
from .data import load_packaged_corpus, load_packaged_vocab
from .matching import MatchThresholds
from .model import DEFAULT_PLACEHOLDER_TOKENS
from .parsing import parse_file, parse_text
from .report import (
    EXIT_HALLUCINATED,
    EXIT_UNVERIFIABLE,
    EXIT_USAGE,
    build_report,
    exit_code_for,
    render_report,
)
from .resolve import (
    ArxivClient,
    CrossrefClient,
    FixtureProvider,
    LookupCache,
    OpenAlexClient,
    ProviderConfig,
    Resolver,
)

_DEFAULT_PROVIDERS = {
    "crossref": ProviderConfig(
        name="crossref", base_endpoint="https://api.crossref.org", rate_limit=5.0
    ),
    "arxiv": ProviderConfig(
        name="arxiv",
        base_endpoint="https://export.arxiv.org/api/query",
        rate_limit=0.33,
    ),
    "openalex": ProviderConfig(
        name="openalex", base_endpoint="https://api.openalex.org", rate_limit=5.0
    ),
}

_THRESHOLD_KEYS = (
    "title_strong",
    "title_moderate",
    "author_strong",
    "year_slack",
    "plausibility",
)


def _read_ini(path: str | None) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    if path:
        read = parser.read(path, encoding="utf-8")
        if not read:
            raise click.UsageError(f"config file not readable: {path}")
    return parser


def _provider_config(name: str, ini: configparser.ConfigParser) -> ProviderConfig:
    base = _DEFAULT_PROVIDERS[name]
    section = f"provider.{name}"
    if not ini.has_section(section):
        return base
    sec = ini[section]
    return ProviderConfig(
        name=name,
        base_endpoint=sec.get("endpoint", base.base_endpoint),
        rate_limit=sec.getfloat("rate_limit", base.rate_limit),
        timeout=sec.getfloat("timeout", base.timeout),
        enabled=sec.getboolean("enabled", base.enabled),
    )


def _thresholds(ini: configparser.ConfigParser, overrides: dict) -> MatchThresholds:
    values = {}
    if ini.has_section("classifier"):
        sec = ini["classifier"]
        for key in _THRESHOLD_KEYS:
            if key in sec:
                values[key] = sec.getint(key) if key == "year_slack" else sec.getfloat(key)
    for key in _THRESHOLD_KEYS:
        if overrides.get(key) is not None:
            values[key] = overrides[key]
    try:
        return MatchThresholds(**values)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _build_runtime(
    offline: bool,
    fixtures: str | None,
    cache: str | None,
    config: str | None,
    vocab: str | None,
    overrides: dict,
):
    if offline and not fixtures:
        raise click.UsageError("--offline requires --fixtures PATH")
    ini = _read_ini(config)
    thresholds = _thresholds(ini, overrides)

    if fixtures:
        providers = [FixtureProvider(fixtures)]
    else:
        providers = [
            CrossrefClient(_provider_config("crossref", ini)),
            ArxivClient(_provider_config("arxiv", ini)),
            OpenAlexClient(_provider_config("openalex", ini)),
        ]

    lookup_cache = LookupCache(cache) if cache else None
    resolver = Resolver(providers, thresholds=thresholds, cache=lookup_cache)

    if vocab:
        vocab_tokens = frozenset(
            line.strip()
            for line in Path(vocab).read_text(encoding="utf-8").splitlines()
            if line.strip()
        )
    else:
        vocab_tokens = load_packaged_vocab()

    sh_requires_real_author = True
    if ini.has_section("classifier"):
        sh_requires_real_author = ini["classifier"].getboolean(
            "sh_requires_real_author", True
        )
    classifier_config = ClassifierConfig(
        thresholds=thresholds,
        placeholder_tokens=DEFAULT_PLACEHOLDER_TOKENS,
        sh_requires_real_author=sh_requires_real_author,
        vocab=vocab_tokens,
    )
    return resolver, classifier_config


def _final_exit(verdicts, fail_on: str) -> int:
    code = exit_code_for(verdicts)
    if fail_on == "unverifiable" and code == EXIT_UNVERIFIABLE:
        return EXIT_HALLUCINATED
    return code


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _runtime_options(fn):
    decorators = [
        click.option("--offline", is_flag=True, help="Never touch the network; requires --fixtures."),
        click.option("--fixtures", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON fixture file standing in for all providers."),
        click.option("--cache", envvar="CITE_AUDIT_CACHE", type=click.Path(dir_okay=False), default=None, help="JSONL lookup cache path (env: CITE_AUDIT_CACHE)."),
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="INI file with [provider.*] and [classifier] sections."),
        click.option("--vocab", type=click.Path(exists=True, dir_okay=False), default=None, help="Newline-delimited token file for plausibility scoring."),
        click.option("--title-strong", type=float, default=None, help="Override strong-title threshold."),
        click.option("--title-moderate", type=float, default=None, help="Override moderate-title threshold."),
        click.option("--author-strong", type=float, default=None, help="Override strong-author threshold."),
        click.option("--year-slack", type=int, default=None, help="Override allowed year difference."),
        click.option("--plausibility", type=float, default=None, help="Override plausibility threshold."),
        click.option("--fail-on", type=click.Choice(["hallucinated", "unverifiable"]), default="hallucinated", show_default=True, help="Treat unverifiable results as failures too."),
    ]
    for decorator in reversed(decorators):
        fn = decorator(fn)
    return fn


@click.group()
@click.version_option(package_name="citeaudit", prog_name="citeaudit")
def cli() -> None:
    """Detect fabricated bibliography entries by checking them against
    scholarly metadata sources."""


@cli.command("verify")
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--input-format",
    type=click.Choice(["auto", "bibtex", "plaintext"]),
    default="auto",
    show_default=True,
)
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "json", "csv"]),
    default="text",
    show_default=True,
)
@click.option("--jobs", type=click.IntRange(min=1), default=4, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")
@_runtime_options
def cmd_verify(
    input_file: str,
    input_format: str,
    output_format: str,
    jobs: int,
    out: str | None,
    offline: bool,
    fixtures: str | None,
    cache: str | None,
    config_path: str | None,
    vocab: str | None,
    title_strong: float | None,
    title_moderate: float | None,
    author_strong: float | None,
    year_slack: int | None,
    plausibility: float | None,
    fail_on: str,
) -> int:
    """Verify every reference in a .bib or .txt bibliography."""
    resolver, classifier_config = _build_runtime(
        offline,
        fixtures,
        cache,
        config_path,
        vocab,
        {
            "title_strong": title_strong,
            "title_moderate": title_moderate,
            "author_strong": author_strong,
            "year_slack": year_slack,
            "plausibility": plausibility,
        },
    )
    parse_report = parse_file(input_file, format=input_format)
    for warning in parse_report.warnings:
        click.echo(f"warning: {warning}", err=True)
    verdicts = classify_batch(
        parse_report.citations, resolver, classifier_config, jobs=jobs
    )
    report = build_report(input_file, parse_report.citations, verdicts)
    _emit(render_report(report, output_format), out)
    return _final_exit(verdicts, fail_on)


@cli.command("classify")
@click.argument("citation_text")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "json", "csv"]),
    default="text",
    show_default=True,
)
@_runtime_options
def cmd_classify(
    citation_text: str,
    output_format: str,
    offline: bool,
    fixtures: str | None,
    cache: str | None,
    config_path: str | None,
    vocab: str | None,
    title_strong: float | None,
    title_moderate: float | None,
    author_strong: float | None,
    year_slack: int | None,
    plausibility: float | None,
    fail_on: str,
) -> int:
    """Classify one plain-text citation given as an argument."""
    if not citation_text.strip():
        raise click.UsageError("citation text must not be empty")
    resolver, classifier_config = _build_runtime(
        offline,
        fixtures,
        cache,
        config_path,
        vocab,
        {
            "title_strong": title_strong,
            "title_moderate": title_moderate,
            "author_strong": author_strong,
            "year_slack": year_slack,
            "plausibility": plausibility,
        },
    )
    parse_report = parse_text(citation_text, format="plaintext")
    citations = list(parse_report.citations)[:1]
    verdicts = classify_batch(citations, resolver, classifier_config, jobs=1)
    report = build_report("<argument>", citations, verdicts)
    _emit(render_report(report, output_format), None)
    return _final_exit(verdicts, fail_on)


@cli.command("stats")
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "csv", "json"]),
    default="text",
    show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the summary here instead of stdout.")
def cmd_stats(corpus: str | None, output_format: str, out: str | None) -> int:
    """Summarize a coded corpus CSV (defaults to the bundled dataset)."""
    try:
        rows = load_corpus(corpus) if corpus else load_packaged_corpus()
    except CorpusError as exc:
        for message in exc.errors:
            click.echo(f"error: {message}", err=True)
        return EXIT_USAGE
    if not rows:
        click.echo("error: corpus has no rows", err=True)
        return EXIT_USAGE
    _emit(render_summary(summarize(rows), output_format), out)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        result = cli.main(args=argv, prog_name="citeaudit", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
