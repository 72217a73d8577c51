"""Corpus loading, validation, and derived researcher/publication/project indices.

The corpus is built from three delimited files (researchers, publications,
projects) and is immutable after construction: every index is derived once
and all downstream analytics treat the corpus as read-only, so it can be
shared freely across threads.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

PROJECT_KINDS = (
    "programme",
    "basic",
    "applicative",
    "postdoc",
    "infrastructure",
    "targeted",
    "euro_complementary",
    "euro_lead_agency",
)

# Six top-level scientific fields; the set is configurable, six is the default.
DEFAULT_FIELDS = (
    "natural_sciences",
    "engineering",
    "medical_sciences",
    "biotechnical_sciences",
    "social_sciences",
    "humanities",
)

# Publication type codes that count as scientific output.
DEFAULT_SCIENTIFIC_TYPES = (
    "article",
    "review",
    "short_article",
    "conference_paper",
    "conference_abstract",
    "chapter",
    "monograph",
)


class CorpusError(Exception):
    """Base class for corpus loading and validation failures."""


class ParseError(CorpusError):
    """A record file is structurally malformed (bad header, field count, or literal)."""

    def __init__(self, path: str, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class ValidationError(CorpusError):
    """The record set violates a corpus invariant (dangling ids, empty researcher set)."""

    def __init__(self, message: str, offending_ids: Sequence[str] = ()):
        self.offending_ids = tuple(sorted(offending_ids))
        if self.offending_ids:
            message = f"{message}: {', '.join(self.offending_ids)}"
        super().__init__(message)


@dataclass(frozen=True)
class CorpusConfig:
    year_bounds: tuple[int, int] = (1970, 2016)
    conor_year: int = 2003
    postdoc_cutoff_year: int = 2007
    postdoc_window_years: int = 7
    scientific_types: tuple[str, ...] = DEFAULT_SCIENTIFIC_TYPES
    fields: tuple[str, ...] = DEFAULT_FIELDS

    def __post_init__(self):
        lo, hi = self.year_bounds
        if lo > hi:
            raise ValueError(f"year_bounds reversed: {self.year_bounds}")
        if len(self.fields) < 2:
            raise ValueError("field taxonomy needs at least two fields")


@dataclass(frozen=True)
class Researcher:
    id: str
    main_field: str
    first_pub_year: Optional[int] = None
    last_pub_year: Optional[int] = None


@dataclass(frozen=True)
class Publication:
    id: str
    year: int
    type_code: str
    total_author_count: int
    registered_authors: frozenset[str]
    is_scientific: bool


@dataclass(frozen=True)
class Project:
    id: str
    kind: str
    start_year: int
    end_year: int
    pi: Optional[str] = None
    # True only for postdoc projects whose PI won the grant within the
    # configured window after their first publication.
    postdoc_subgroup: bool = False


@dataclass(frozen=True)
class ProjectYearCounts:
    year: int
    new_projects: int
    active_projects: int
    new_pis: int
    active_pis: int


@dataclass(frozen=True)
class Corpus:
    researchers: Mapping[str, Researcher]
    publications: Mapping[str, Publication]
    projects: Mapping[str, Project]
    config: CorpusConfig
    diagnostics: tuple[str, ...]
    # Derived sets and indices (A, Pi, A_y, P_y, per-researcher publication lists).
    active: frozenset[str] = field(default_factory=frozenset)
    pis: frozenset[str] = field(default_factory=frozenset)
    productive_by_year: Mapping[int, frozenset[str]] = field(default_factory=dict)
    publications_by_year: Mapping[int, tuple[str, ...]] = field(default_factory=dict)
    publications_by_researcher: Mapping[str, Mapping[int, tuple[str, ...]]] = field(
        default_factory=dict
    )
    projects_by_pi: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    first_project_year: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def from_records(
        cls,
        researchers: Iterable[Researcher],
        publications: Iterable[Publication],
        projects: Iterable[Project],
        config: CorpusConfig = CorpusConfig(),
        extra_diagnostics: Sequence[str] = (),
    ) -> "Corpus":
        """Validate raw records and build every derived index.

        Records violating per-record invariants are rejected with a
        diagnostic; referential-integrity violations and an empty researcher
        set abort with :class:`ValidationError`.
        """
        diagnostics = list(extra_diagnostics)
        lo, hi = config.year_bounds
        taxonomy = set(config.fields)

        kept_researchers: dict[str, Researcher] = {}
        for r in researchers:
            if r.id in kept_researchers:
                diagnostics.append(f"researcher {r.id}: duplicate id, record dropped")
            elif r.main_field not in taxonomy:
                diagnostics.append(
                    f"researcher {r.id}: unknown field {r.main_field!r}, record dropped"
                )
            else:
                kept_researchers[r.id] = r
        if not kept_researchers:
            raise ValidationError("empty researcher set")

        kept_pubs: dict[str, Publication] = {}
        for p in publications:
            if p.id in kept_pubs:
                diagnostics.append(f"publication {p.id}: duplicate id, record dropped")
            elif p.total_author_count < 1:
                diagnostics.append(
                    f"publication {p.id}: non-positive author count, record dropped"
                )
            elif p.total_author_count < len(p.registered_authors):
                diagnostics.append(
                    f"publication {p.id}: total author count below registered count, record dropped"
                )
            elif not lo <= p.year <= hi:
                diagnostics.append(
                    f"publication {p.id}: year {p.year} outside bounds {lo}-{hi}, record dropped"
                )
            else:
                kept_pubs[p.id] = replace(
                    p, is_scientific=p.type_code in config.scientific_types
                )

        kept_projects: dict[str, Project] = {}
        for j in projects:
            if j.id in kept_projects:
                diagnostics.append(f"project {j.id}: duplicate id, record dropped")
            elif j.kind not in PROJECT_KINDS:
                diagnostics.append(
                    f"project {j.id}: unknown kind {j.kind!r}, record dropped"
                )
            elif j.start_year > j.end_year:
                diagnostics.append(
                    f"project {j.id}: start year after end year, record dropped"
                )
            else:
                kept_projects[j.id] = j

        dangling = {
            a
            for p in kept_pubs.values()
            for a in p.registered_authors
            if a not in kept_researchers
        }
        dangling |= {
            j.pi
            for j in kept_projects.values()
            if j.pi is not None and j.pi not in kept_researchers
        }
        if dangling:
            raise ValidationError("unknown researcher ids referenced", sorted(dangling))

        # First/last publication years come from the publication table; any
        # values carried by the researcher file are overridden.
        pubs_by_researcher: dict[str, dict[int, list[str]]] = {}
        for pid in sorted(kept_pubs):
            p = kept_pubs[pid]
            if not p.is_scientific:
                continue
            for a in p.registered_authors:
                pubs_by_researcher.setdefault(a, {}).setdefault(p.year, []).append(pid)

        final_researchers: dict[str, Researcher] = {}
        for rid, r in kept_researchers.items():
            years = pubs_by_researcher.get(rid)
            if years:
                final_researchers[rid] = replace(
                    r, first_pub_year=min(years), last_pub_year=max(years)
                )
            else:
                final_researchers[rid] = replace(
                    r, first_pub_year=None, last_pub_year=None
                )

        kept_projects, reclass_diags = reclassify_postdocs(
            kept_projects,
            final_researchers,
            config.postdoc_cutoff_year,
            config.postdoc_window_years,
        )
        diagnostics.extend(reclass_diags)

        active = frozenset(pubs_by_researcher)
        productive_by_year: dict[int, set[str]] = {}
        publications_by_year: dict[int, list[str]] = {}
        for pid in sorted(kept_pubs):
            p = kept_pubs[pid]
            if not p.is_scientific:
                continue
            publications_by_year.setdefault(p.year, []).append(pid)
            for a in p.registered_authors:
                productive_by_year.setdefault(p.year, set()).add(a)

        projects_by_pi: dict[str, list[str]] = {}
        for jid in sorted(kept_projects):
            j = kept_projects[jid]
            if j.pi is not None:
                projects_by_pi.setdefault(j.pi, []).append(jid)

        pis = set()
        for pi in projects_by_pi:
            if pi in active:
                pis.add(pi)
            else:
                diagnostics.append(
                    f"PI {pi}: no scientific publication in bounds, excluded from PI set"
                )

        first_project_year = {
            pi: min(kept_projects[jid].start_year for jid in jids)
            for pi, jids in projects_by_pi.items()
        }

        return cls(
            researchers=final_researchers,
            publications=kept_pubs,
            projects=kept_projects,
            config=config,
            diagnostics=tuple(diagnostics),
            active=active,
            pis=frozenset(pis),
            productive_by_year={
                y: frozenset(v) for y, v in productive_by_year.items()
            },
            publications_by_year={
                y: tuple(v) for y, v in publications_by_year.items()
            },
            publications_by_researcher={
                r: {y: tuple(v) for y, v in by_year.items()}
                for r, by_year in pubs_by_researcher.items()
            },
            projects_by_pi={pi: tuple(v) for pi, v in projects_by_pi.items()},
            first_project_year=first_project_year,
        )

    def scientific_publications(self, researcher: str, year: int) -> tuple[Publication, ...]:
        """P_y(r): the researcher's scientific publications in the given year."""
        by_year = self.publications_by_researcher.get(researcher, {})
        return tuple(self.publications[pid] for pid in by_year.get(year, ()))


def reclassify_postdocs(
    projects: Mapping[str, Project],
    researchers: Mapping[str, Researcher],
    cutoff_year: int = 2007,
    window_years: int = 7,
) -> tuple[dict[str, Project], list[str]]:
    """Normalize postdoc projects and mark postdoc-subgroup membership.

    Postdoc projects starting before the cutoff year were in practice led by
    the mentors, so they become basic projects. A remaining postdoc project
    joins the postdoc subgroup only if its PI's first publication is at most
    ``window_years`` before the project start; older first publications
    clear the flag (project kept, flag off). Idempotent.
    """
    out: dict[str, Project] = {}
    diagnostics: list[str] = []
    for jid, j in projects.items():
        if j.kind != "postdoc":
            out[jid] = replace(j, postdoc_subgroup=False) if j.postdoc_subgroup else j
            continue
        if j.start_year < cutoff_year:
            out[jid] = replace(j, kind="basic", postdoc_subgroup=False)
            continue
        if j.pi is None:
            diagnostics.append(f"project {jid}: postdoc project without PI")
            out[jid] = replace(j, postdoc_subgroup=False) if j.postdoc_subgroup else j
            continue
        first = researchers[j.pi].first_pub_year if j.pi in researchers else None
        in_window = first is not None and j.start_year - first <= window_years
        out[jid] = replace(j, postdoc_subgroup=in_window)
    return out, diagnostics


def active_projects(
    corpus: Corpus, year: int, kind_filter: Optional[Iterable[str]] = None
) -> list[Project]:
    """Projects active in the year (start <= year <= end), optionally by kind."""
    kinds = None if kind_filter is None else set(kind_filter)
    return [
        corpus.projects[jid]
        for jid in sorted(corpus.projects)
        if corpus.projects[jid].start_year <= year <= corpus.projects[jid].end_year
        and (kinds is None or corpus.projects[jid].kind in kinds)
    ]


def project_counts_series(corpus: Corpus) -> list[ProjectYearCounts]:
    """Per-year counts of new/active projects and new/active PIs."""
    if not corpus.projects:
        return []
    years = range(
        min(j.start_year for j in corpus.projects.values()),
        max(j.end_year for j in corpus.projects.values()) + 1,
    )
    rows = []
    for y in years:
        active = active_projects(corpus, y)
        rows.append(
            ProjectYearCounts(
                year=y,
                new_projects=sum(
                    1 for j in corpus.projects.values() if j.start_year == y
                ),
                active_projects=len(active),
                new_pis=sum(
                    1
                    for pi in corpus.pis
                    if corpus.first_project_year.get(pi) == y
                ),
                active_pis=len(
                    {j.pi for j in active if j.pi is not None and j.pi in corpus.pis}
                ),
            )
        )
    return rows


def _parse_int(value: str, path: str, line_no: int, name: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(path, line_no, f"bad integer for {name}: {value!r}") from None


def _read_rows(path: str | Path, expected_header: Sequence[str]):
    path = Path(path)
    try:
        handle = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot open {path}: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != list(expected_header):
            raise ParseError(
                str(path), 1, f"expected header {','.join(expected_header)}, got {header}"
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected_header):
                raise ParseError(
                    str(path), line_no, f"expected {len(expected_header)} fields, got {len(row)}"
                )
            yield line_no, row


def load_corpus(
    researcher_path: str | Path,
    publication_path: str | Path,
    project_path: str | Path,
    config: CorpusConfig = CorpusConfig(),
) -> Corpus:
    """Parse the three record files and construct a validated corpus."""
    researchers = [
        Researcher(id=row[0], main_field=row[1])
        for _, row in _read_rows(researcher_path, ("id", "main_field"))
    ]

    publications = []
    pub_path = str(publication_path)
    header = ("id", "year", "type_code", "total_author_count", "registered_author_ids")
    for line_no, row in _read_rows(publication_path, header):
        authors = frozenset(a for a in row[4].split(";") if a)
        publications.append(
            Publication(
                id=row[0],
                year=_parse_int(row[1], pub_path, line_no, "year"),
                type_code=row[2],
                total_author_count=_parse_int(
                    row[3], pub_path, line_no, "total_author_count"
                ),
                registered_authors=authors,
                is_scientific=False,  # classified against the configured whitelist
            )
        )

    projects = []
    proj_path = str(project_path)
    for line_no, row in _read_rows(
        project_path, ("id", "kind_code", "start_year", "end_year", "pi_id")
    ):
        projects.append(
            Project(
                id=row[0],
                kind=row[1],
                start_year=_parse_int(row[2], proj_path, line_no, "start_year"),
                end_year=_parse_int(row[3], proj_path, line_no, "end_year"),
                pi=row[4] or None,
            )
        )

    return Corpus.from_records(researchers, publications, projects, config)
