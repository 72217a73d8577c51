"""Command-line entry point.

Verbs: validate, indicators, careers, network, correlations, report.
Exit codes: 0 success, 1 usage/config error, 2 data validation error,
3 I/O error. All outputs are deterministic: identical inputs and config
produce byte-identical files.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from . import __version__, report
from .config import CONFIG_ENV_VAR, ConfigError, RunConfig, build_run_config
from .corpus import (
    CorpusError,
    PROJECT_KINDS,
    ParseError,
    ValidationError,
    load_corpus,
)
from .indicators import GroupSelector, UnknownIndicatorError
from .netlab import EXPORT_FORMATS, build_network, export_network
from .stats import CorrelationError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3


def parse_group(name: str) -> GroupSelector:
    if name == "all":
        return GroupSelector.all_active()
    if name == "pis":
        return GroupSelector.all_pis()
    if name.startswith("pis:"):
        kind = name[4:]
        if kind not in PROJECT_KINDS:
            raise ConfigError(
                f"unknown project kind {kind!r}; expected one of {', '.join(PROJECT_KINDS)}"
            )
        return GroupSelector.pis_by_kind([kind])
    raise ConfigError(f"unknown group {name!r}; expected all, pis, or pis:<kind>")


def _load(cfg: RunConfig):
    researchers, publications, projects = cfg.corpus_paths()
    return load_corpus(researchers, publications, projects, cfg.corpus_config())


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    return out


def _common_options(fn):
    options = [
        click.option(
            "--config",
            "config_path",
            default=lambda: os.environ.get(CONFIG_ENV_VAR),
            help=f"Config file path (default: ${CONFIG_ENV_VAR}).",
        ),
        click.option("--researchers", help="Researchers file."),
        click.option("--publications", help="Publications file."),
        click.option("--projects", help="Projects file."),
        click.option("--out", help="Output directory."),
        click.option("--from", "year_from", type=int, help="First corpus year."),
        click.option("--to", "year_to", type=int, help="Last corpus year."),
        click.option(
            "--group",
            "groups",
            multiple=True,
            help="Researcher group (all, pis, pis:<kind>); repeatable.",
        ),
        click.option("--periods", help="Network periods, e.g. 1970-1994..2016."),
        click.option("--format", "format", help="Table output format (csv)."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _config(kwargs) -> RunConfig:
    cfg = build_run_config(kwargs.pop("config_path"), **kwargs)
    if cfg.format != "csv":
        raise ConfigError(f"unsupported output format {cfg.format!r}")
    return cfg


def _groups(cfg: RunConfig) -> list[GroupSelector]:
    groups = [parse_group(name) for name in cfg.groups]
    if not groups:
        raise ConfigError("empty group selection")
    return groups


@click.group()
@click.version_option(version=__version__, prog_name="sciperf")
def cli():
    """Scientific-performance analytics for funded-researcher corpora."""


@cli.command()
@_common_options
def validate(**kwargs):
    """Load the corpus and print record counts and diagnostics."""
    cfg = _config(kwargs)
    corpus = _load(cfg)
    click.echo(f"researchers: {len(corpus.researchers)}")
    click.echo(f"publications: {len(corpus.publications)}")
    click.echo(f"projects: {len(corpus.projects)}")
    known_pi_projects = sum(
        1 for j in corpus.projects.values() if j.pi is not None and j.pi in corpus.pis
    )
    click.echo(f"projects with known, published PI: {known_pi_projects}")
    click.echo(f"|A| (active researchers): {len(corpus.active)}")
    click.echo(f"|Pi| (principal investigators): {len(corpus.pis)}")
    if corpus.diagnostics:
        click.echo(f"diagnostics ({len(corpus.diagnostics)}):")
        for line in corpus.diagnostics:
            click.echo(f"  - {line}")
    else:
        click.echo("diagnostics: none")


@cli.command()
@_common_options
def indicators(**kwargs):
    """Write one CSV per indicator with per-year group means."""
    cfg = _config(kwargs)
    groups = _groups(cfg)
    corpus = _load(cfg)
    tables = report.indicator_tables(
        corpus, groups, range(cfg.year_from, cfg.year_to + 1)
    )
    for path in report.write_indicator_tables(_out_dir(cfg), tables):
        click.echo(str(path))


@cli.command()
@_common_options
@click.option("--drop-short", type=int, help="Career-length filter: drop careers this short or shorter.")
@click.option("--stopped-by", type=int, help="Career-length filter: last publication year cap.")
@click.option("--postdoc-before", type=int, help="Postdoc cohort: postdoc start before this year.")
@click.option("--horizon", type=int, help="Postdoc follow-up horizon year.")
def careers(**kwargs):
    """Write career population, share, series, subgroup, length, and follow-up tables."""
    cfg = _config(kwargs)
    groups = _groups(cfg)
    corpus = _load(cfg)
    tables = report.career_tables(
        corpus,
        groups,
        drop_short=cfg.drop_short,
        stopped_by=cfg.stopped_by,
        postdoc_before=cfg.postdoc_before,
        horizon=cfg.horizon,
    )
    for path in report.write_career_tables(_out_dir(cfg), tables):
        click.echo(str(path))


@cli.command()
@_common_options
@click.option(
    "--export-networks",
    is_flag=True,
    default=False,
    help="Also export each period's network.",
)
@click.option(
    "--export-format",
    type=click.Choice(EXPORT_FORMATS),
    default="edge_list",
    show_default=True,
)
def network(export_networks, export_format, **kwargs):
    """Write the per-period invariant table, optionally with network exports."""
    cfg = _config(kwargs)
    corpus = _load(cfg)
    periods = cfg.parsed_periods()
    out = _out_dir(cfg)
    rows = report.network_rows(corpus, periods)
    click.echo(str(report.write_network_table(out, rows)))
    if export_networks:
        suffix = "txt" if export_format == "edge_list" else "json"
        for start, end in periods:
            net = build_network(corpus, start, end)
            path = out / f"network_{start}_{end}.{suffix}"
            export_network(net, path, export_format)
            click.echo(str(path))


@cli.command()
@_common_options
@click.option("--correlation-from", type=int, help="First correlation year.")
@click.option("--correlation-to", type=int, help="Last correlation year.")
def correlations(**kwargs):
    """Correlate active-project counts with every indicator series."""
    cfg = _config(kwargs)
    corpus = _load(cfg)
    last = cfg.correlation_to if cfg.correlation_to is not None else cfg.year_to
    rows = report.correlation_rows(corpus, range(cfg.correlation_from, last + 1))
    click.echo(str(report.write_correlation_table(_out_dir(cfg), rows)))


@cli.command(name="report")
@_common_options
@click.option(
    "--figures/--no-figures",
    "figures",
    default=None,
    help="Render PNG figures alongside the tables (default: on).",
)
def report_cmd(**kwargs):
    """Run every analysis and write all tables, a JSON bundle, and figures."""
    cfg = _config(kwargs)
    groups = _groups(cfg)
    corpus = _load(cfg)
    out = _out_dir(cfg)
    years = range(cfg.year_from, cfg.year_to + 1)

    indicator_tabs = report.indicator_tables(corpus, groups, years)
    career_tabs = report.career_tables(
        corpus,
        groups,
        drop_short=cfg.drop_short,
        stopped_by=cfg.stopped_by,
        postdoc_before=cfg.postdoc_before,
        horizon=cfg.horizon,
    )
    net_rows = report.network_rows(corpus, cfg.parsed_periods())
    corr_last = cfg.correlation_to if cfg.correlation_to is not None else cfg.year_to
    corr_rows = report.correlation_rows(
        corpus, range(cfg.correlation_from, corr_last + 1)
    )
    counts = report.project_count_rows(corpus)

    report.write_indicator_tables(out, indicator_tabs)
    report.write_career_tables(out, career_tabs)
    report.write_network_table(out, net_rows)
    report.write_correlation_table(out, corr_rows)
    report.write_project_counts(out, counts)

    bundle = report.make_bundle(
        config_echo={
            "researchers": cfg.researchers,
            "publications": cfg.publications,
            "projects": cfg.projects,
            "year_bounds": [cfg.year_from, cfg.year_to],
            "conor_year": cfg.conor_year,
            "postdoc_cutoff_year": cfg.postdoc_cutoff_year,
            "postdoc_window_years": cfg.postdoc_window_years,
            "groups": list(cfg.groups),
            "periods": [list(p) for p in cfg.parsed_periods()],
            "correlation_years": [cfg.correlation_from, corr_last],
        },
        tables={
            "indicators": indicator_tabs,
            "careers": career_tabs,
            "network_invariants": net_rows,
            "correlations": corr_rows,
            "project_counts": counts,
        },
    )
    click.echo(str(report.write_bundle(out, bundle)))
    if cfg.figures:
        for path in report.render_figures(
            out, indicator_tabs, career_tabs, net_rows, counts
        ):
            click.echo(str(path))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except (ParseError, ValidationError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION
    except (ConfigError, UnknownIndicatorError, CorrelationError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except click.exceptions.Exit as exc:  # --help / --version
        return exc.exit_code
    except (OSError, CorpusError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
