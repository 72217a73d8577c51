"""Report tables and their serializations.

Tables are computed once as lists of plain dict rows and can be written as
CSV (fixed column order, 4-decimal rounding, human-diffable) or bundled into
a single JSON document carrying full double precision. The optional figure
path renders each table's plot-ready series to PNG files next to the
delimited output; the series files remain the contract.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import __version__
from .corpus import Corpus, project_counts_series
from .careers import (
    CAREER_INDICATORS,
    career_series,
    filtered_career_length,
    mean_career_length,
    population_by_pcy,
    postdoc_followup_rate,
    subgroup_career_series,
)
from .indicators import INDICATOR_NAMES, GroupSelector, indicator_series
from .netlab import invariant_table
from .stats import correlation_report

INVARIANT_COLUMNS = (
    "start_year",
    "end_year",
    "n_a",
    "n_pi",
    "gamma_gc",
    "n_pi_gc",
    "n_pi_star",
    "alpha_star",
    "nu_a",
    "nu_pi",
    "zeta_cross",
    "zeta_cross_singletons",
    "gamma_cross",
)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])


def indicator_tables(
    corpus: Corpus, groups: Sequence[GroupSelector], years: range
) -> dict[str, list[dict]]:
    """One table per indicator with rows (year, group, value, population)."""
    tables: dict[str, list[dict]] = {}
    for name in INDICATOR_NAMES:
        rows = []
        for group in groups:
            series = indicator_series(corpus, group, name, years)
            for year in sorted(series.values):
                rows.append(
                    {
                        "year": year,
                        "group": group.label,
                        "value": series.values[year],
                        "population": series.population[year],
                    }
                )
        rows.sort(key=lambda r: (r["year"], r["group"]))
        tables[name] = rows
    return tables


def career_tables(
    corpus: Corpus,
    groups: Sequence[GroupSelector],
    drop_short: int = 3,
    stopped_by: Optional[int] = None,
    postdoc_before: int = 2011,
    horizon: int = 2017,
) -> dict[str, list[dict]]:
    """Career tables: populations, PI share, series, subgroup series, lengths, follow-up."""
    if stopped_by is None:
        stopped_by = corpus.config.year_bounds[1] - 2
    tables: dict[str, list[dict]] = {}

    populations = {g.label: population_by_pcy(corpus, g) for g in groups}
    tables["population_by_pcy"] = [
        {"pcy": k, "group": label, "population": pop[k]}
        for label, pop in sorted(populations.items())
        for k in sorted(pop)
    ]
    tables["population_by_pcy"].sort(key=lambda r: (r["pcy"], r["group"]))

    pop_all = population_by_pcy(corpus, GroupSelector.all_active())
    pop_pis = population_by_pcy(corpus, GroupSelector.all_pis())
    tables["pi_share_by_pcy"] = [
        {
            "pcy": k,
            "n_active": pop_all[k],
            "n_pis": pop_pis.get(k, 0),
            "pi_share": pop_pis.get(k, 0) / pop_all[k],
        }
        for k in sorted(pop_all)
    ]

    for indicator in CAREER_INDICATORS:
        rows = []
        for group in groups:
            series = career_series(corpus, group, indicator)
            for k in sorted(series.values):
                rows.append(
                    {
                        "pcy": k,
                        "group": group.label,
                        "value": series.values[k],
                        "population": series.population[k],
                    }
                )
        rows.sort(key=lambda r: (r["pcy"], r["group"]))
        tables[f"career_{indicator}"] = rows

    kinds = sorted({j.kind for j in corpus.projects.values()})
    subgroup_rows = []
    for kind in kinds:
        series = subgroup_career_series(corpus, kind)
        for k in sorted(series.values):
            subgroup_rows.append(
                {
                    "pcy": k,
                    "kind": kind,
                    "value": series.values[k],
                    "population": series.population[k],
                }
            )
    subgroup_rows.sort(key=lambda r: (r["pcy"], r["kind"]))
    tables["career_subgroups"] = subgroup_rows

    tables["career_lengths"] = [
        {
            "group": g.label,
            "mean_length": mean_career_length(corpus, g),
            "filtered_mean_length": filtered_career_length(
                corpus, g, drop_short=drop_short, require_stopped_by=stopped_by
            ),
            "drop_short": drop_short,
            "stopped_by": stopped_by,
        }
        for g in groups
    ]

    tables["postdoc_followup"] = [
        {
            "postdoc_before": postdoc_before,
            "horizon": horizon,
            "rate": postdoc_followup_rate(corpus, postdoc_before, horizon),
        }
    ]
    return tables


def network_rows(corpus: Corpus, periods: Sequence[tuple[int, int]]) -> list[dict]:
    return [
        {c: getattr(row, c) for c in INVARIANT_COLUMNS}
        for row in invariant_table(corpus, periods)
    ]


def correlation_rows(corpus: Corpus, years: range) -> list[dict]:
    return [
        {"indicator": r.indicator, "n_years": r.n_years, "r": r.r, "note": r.note}
        for r in correlation_report(corpus, years)
    ]


def project_count_rows(corpus: Corpus) -> list[dict]:
    return [
        {
            "year": row.year,
            "new_projects": row.new_projects,
            "active_projects": row.active_projects,
            "new_pis": row.new_pis,
            "active_pis": row.active_pis,
        }
        for row in project_counts_series(corpus)
    ]


def write_indicator_tables(out_dir: Path, tables: dict[str, list[dict]]) -> list[Path]:
    paths = []
    for name in sorted(tables):
        path = out_dir / f"indicator_{name}.csv"
        write_csv(path, ("year", "group", "value", "population"), tables[name])
        paths.append(path)
    return paths


_CAREER_COLUMNS = {
    "population_by_pcy": ("pcy", "group", "population"),
    "pi_share_by_pcy": ("pcy", "n_active", "n_pis", "pi_share"),
    "career_subgroups": ("pcy", "kind", "value", "population"),
    "career_lengths": (
        "group",
        "mean_length",
        "filtered_mean_length",
        "drop_short",
        "stopped_by",
    ),
    "postdoc_followup": ("postdoc_before", "horizon", "rate"),
}


def write_career_tables(out_dir: Path, tables: dict[str, list[dict]]) -> list[Path]:
    paths = []
    for name in sorted(tables):
        columns = _CAREER_COLUMNS.get(name, ("pcy", "group", "value", "population"))
        path = out_dir / f"{name}.csv"
        write_csv(path, columns, tables[name])
        paths.append(path)
    return paths


def write_network_table(out_dir: Path, rows: list[dict]) -> Path:
    path = out_dir / "network_invariants.csv"
    write_csv(path, INVARIANT_COLUMNS, rows)
    return path


def write_correlation_table(out_dir: Path, rows: list[dict]) -> Path:
    path = out_dir / "correlations.csv"
    write_csv(path, ("indicator", "n_years", "r", "note"), rows)
    return path


def write_project_counts(out_dir: Path, rows: list[dict]) -> Path:
    path = out_dir / "project_counts.csv"
    write_csv(
        path, ("year", "new_projects", "active_projects", "new_pis", "active_pis"), rows
    )
    return path


def write_bundle(out_dir: Path, bundle: dict) -> Path:
    """Single JSON document aggregating all tables, full double precision."""
    path = out_dir / "report.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(bundle, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


def make_bundle(config_echo: dict, tables: dict) -> dict:
    return {
        "tool": "sciperf",
        "version": __version__,
        "config": config_echo,
        "tables": tables,
    }


def render_figures(
    out_dir: Path,
    indicator_tabs: Optional[dict[str, list[dict]]] = None,
    career_tabs: Optional[dict[str, list[dict]]] = None,
    network_tab: Optional[list[dict]] = None,
    project_counts: Optional[list[dict]] = None,
) -> list[Path]:
    """Render line plots for the computed series to PNG files."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig_dir = out_dir / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def save(fig, name: str) -> None:
        path = fig_dir / f"{name}.png"
        fig.savefig(path, dpi=120, metadata={"Software": "sciperf"})
        plt.close(fig)
        written.append(path)

    def grouped_lines(rows: list[dict], xkey: str, group_key: str, title: str, name: str):
        fig, ax = plt.subplots(figsize=(7, 4))
        labels = sorted({r[group_key] for r in rows})
        for label in labels:
            pts = [(r[xkey], r["value"]) for r in rows if r[group_key] == label]
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=".", label=label)
        ax.set_xlabel(xkey)
        ax.set_title(title)
        if labels:
            ax.legend()
        fig.tight_layout()
        save(fig, name)

    if indicator_tabs:
        for ind, rows in sorted(indicator_tabs.items()):
            if rows:
                grouped_lines(rows, "year", "group", ind, f"indicator_{ind}")

    if career_tabs:
        for name, rows in sorted(career_tabs.items()):
            if not rows:
                continue
            if name.startswith("career_") and name not in (
                "career_lengths",
                "career_subgroups",
            ):
                grouped_lines(rows, "pcy", "group", name, name)
            elif name == "career_subgroups":
                grouped_lines(rows, "pcy", "kind", name, name)
            elif name == "population_by_pcy":
                fig, ax = plt.subplots(figsize=(7, 4))
                for label in sorted({r["group"] for r in rows}):
                    pts = [(r["pcy"], r["population"]) for r in rows if r["group"] == label]
                    ax.semilogy([p[0] for p in pts], [p[1] for p in pts], label=label)
                ax.set_xlabel("pcy")
                ax.set_title("population by PCY")
                ax.legend()
                fig.tight_layout()
                save(fig, "population_by_pcy")
            elif name == "pi_share_by_pcy":
                fig, ax = plt.subplots(figsize=(7, 4))
                ax.plot([r["pcy"] for r in rows], [r["pi_share"] for r in rows])
                ax.set_xlabel("pcy")
                ax.set_ylabel("PI share")
                ax.set_title("PI share by PCY")
                fig.tight_layout()
                save(fig, "pi_share_by_pcy")

    if network_tab:
        fig, ax = plt.subplots(figsize=(7, 4))
        ends = [r["end_year"] for r in network_tab]
        ax.plot(ends, [r["gamma_gc"] for r in network_tab], marker=".", label="gamma_gc")
        ax.plot(
            ends, [r["gamma_cross"] for r in network_tab], marker=".", label="gamma_cross"
        )
        alpha = [(r["end_year"], r["alpha_star"]) for r in network_tab if r["alpha_star"] is not None]
        if alpha:
            ax.plot([p[0] for p in alpha], [p[1] for p in alpha], marker=".", label="alpha_star")
        ax.set_xlabel("period end year")
        ax.set_title("network invariants")
        ax.legend()
        fig.tight_layout()
        save(fig, "network_invariants")

    if project_counts:
        fig, ax = plt.subplots(figsize=(7, 4))
        years = [r["year"] for r in project_counts]
        for key in ("new_projects", "active_projects", "new_pis", "active_pis"):
            ax.plot(years, [r[key] for r in project_counts], marker=".", label=key)
        ax.set_xlabel("year")
        ax.set_title("project counts")
        ax.legend()
        fig.tight_layout()
        save(fig, "project_counts")

    return written
