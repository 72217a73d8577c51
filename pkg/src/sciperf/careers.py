"""Career-aligned statistics: publication career years, normalized trajectories,
career lengths, PI subgroups, and the postdoc follow-up rate.

Calendar years are re-indexed onto publication career years (PCY), counted
from a researcher's first scientific publication. Yearly values are
normalized by the mean of the same indicator over all productive researchers
of that calendar year, so trajectories from different eras are comparable.
Silent in-span years count as zero for the count indicators (productivity,
collaboration) but are omitted for the ratio indicators (internationality,
interdisciplinarity), where undefined is not zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .corpus import Corpus
from .indicators import (
    GroupSelector,
    collaborator_count,
    publication_count,
    researcher_interdisciplinarity,
    researcher_internationality,
)

CAREER_INDICATORS = (
    "productivity",
    "collaboration",
    "internationality",
    "interdisciplinarity",
)

_COUNT_INDICATORS = frozenset({"productivity", "collaboration"})


@dataclass(frozen=True)
class CareerSpan:
    researcher: str
    start_year: int
    end_year: int

    @property
    def length_years(self) -> int:
        return self.end_year - self.start_year + 1


@dataclass
class CareerSeries:
    indicator_name: str
    group: str
    values: dict[int, float] = field(default_factory=dict)
    population: dict[int, int] = field(default_factory=dict)


def career_span(corpus: Corpus, researcher: str) -> CareerSpan:
    """First-to-last scientific publication span; error for researchers outside A."""
    r = corpus.researchers.get(researcher)
    if r is None or r.first_pub_year is None or r.last_pub_year is None:
        raise ValueError(f"researcher {researcher!r} has no scientific publication")
    return CareerSpan(researcher, r.first_pub_year, r.last_pub_year)


def population_by_pcy(corpus: Corpus, group: GroupSelector) -> dict[int, int]:
    """Number of group members still active at each PCY (non-increasing)."""
    lengths = [
        career_span(corpus, r).length_years for r in group.resolve(corpus)
    ]
    if not lengths:
        return {}
    return {
        k: sum(1 for length in lengths if length >= k)
        for k in range(1, max(lengths) + 1)
    }


def _raw_value(corpus: Corpus, researcher: str, year: int, indicator: str) -> Optional[float]:
    """Per-researcher calendar-year value feeding normalization.

    Count indicators return 0.0 for silent years; ratio indicators return
    None when undefined (no co-authors, or pre-CONOR for internationality).
    """
    if indicator == "productivity":
        return float(publication_count(corpus, researcher, year))
    if indicator == "collaboration":
        return collaborator_count(corpus, researcher, year, registered_only=True)
    if indicator == "internationality":
        if year < corpus.config.conor_year:
            return None
        return researcher_internationality(corpus, researcher, year)
    if indicator == "interdisciplinarity":
        return researcher_interdisciplinarity(corpus, researcher, year)
    raise ValueError(f"unknown career indicator {indicator!r}")


def _baseline(corpus: Corpus, year: int, indicator: str) -> Optional[float]:
    """Mean of the raw indicator over all productive researchers of the year."""
    members = corpus.productive_by_year.get(year)
    if not members:
        return None
    values = []
    for r in members:
        v = _raw_value(corpus, r, year, indicator)
        if v is not None:
            values.append(v)
    if not values:
        return None
    mean = sum(values) / len(values)
    return mean if mean > 0 else None


def normalized_indicator(
    corpus: Corpus, researcher: str, year: int, indicator: str
) -> Optional[float]:
    """Raw yearly value divided by that year's all-productive-researchers mean.

    The baseline is always the full productive population A_y, also for
    PI-group trajectories. None when the raw value or the baseline is
    undefined.
    """
    span = career_span(corpus, researcher)
    if not span.start_year <= year <= span.end_year:
        raise ValueError(
            f"year {year} outside career span of {researcher!r} "
            f"({span.start_year}-{span.end_year})"
        )
    raw = _raw_value(corpus, researcher, year, indicator)
    if raw is None:
        return None
    baseline = _baseline(corpus, year, indicator)
    if baseline is None:
        return None
    return raw / baseline


def career_series(
    corpus: Corpus, group: GroupSelector, indicator: str
) -> CareerSeries:
    """Mean normalized indicator per PCY over the group members active at that PCY."""
    if indicator not in CAREER_INDICATORS:
        raise ValueError(f"unknown career indicator {indicator!r}")
    members = sorted(group.resolve(corpus))
    series = CareerSeries(indicator_name=indicator, group=group.label)
    if not members:
        return series
    baselines: dict[int, Optional[float]] = {}
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for r in members:
        span = career_span(corpus, r)
        for k in range(1, span.length_years + 1):
            year = span.start_year + k - 1
            raw = _raw_value(corpus, r, year, indicator)
            if raw is None:
                continue
            if year not in baselines:
                baselines[year] = _baseline(corpus, year, indicator)
            baseline = baselines[year]
            if baseline is None:
                continue
            sums[k] = sums.get(k, 0.0) + raw / baseline
            counts[k] = counts.get(k, 0) + 1
    for k in sorted(sums):
        series.values[k] = sums[k] / counts[k]
        series.population[k] = counts[k]
    return series


def mean_career_length(corpus: Corpus, group: GroupSelector) -> Optional[float]:
    """Unfiltered mean publication-career length over the group."""
    return filtered_career_length(corpus, group, drop_short=0, require_stopped_by=None)


def filtered_career_length(
    corpus: Corpus,
    group: GroupSelector,
    drop_short: int = 0,
    require_stopped_by: Optional[int] = None,
) -> Optional[float]:
    """Mean career length after dropping short careers and still-active members.

    Keeps members with length strictly above ``drop_short`` whose last
    publication is no later than ``require_stopped_by`` (None disables the
    stop filter). Undefined on an empty filtered set.
    """
    lengths = []
    for r in group.resolve(corpus):
        span = career_span(corpus, r)
        if span.length_years <= drop_short:
            continue
        if require_stopped_by is not None and span.end_year > require_stopped_by:
            continue
        lengths.append(span.length_years)
    if not lengths:
        return None
    return sum(lengths) / len(lengths)


def subgroup_career_series(corpus: Corpus, kind: str) -> CareerSeries:
    """Career productivity of PIs that ever led a project of the given kind."""
    return career_series(corpus, GroupSelector.pis_by_kind([kind]), "productivity")


def postdoc_followup_rate(
    corpus: Corpus, postdoc_before: int, horizon: int
) -> Optional[float]:
    """Fraction of early-postdoc PIs that never won another project by the horizon.

    The cohort holds postdoc-subgroup PIs whose postdoc started strictly
    before ``postdoc_before``; a member fails the follow-up when no project
    other than their qualifying postdoc(s) starts by ``horizon``.
    """
    if postdoc_before > horizon:
        raise ValueError("postdoc_before must not exceed horizon")
    cohort: dict[str, set[str]] = {}
    for jid, j in corpus.projects.items():
        if (
            j.kind == "postdoc"
            and j.postdoc_subgroup
            and j.pi in corpus.pis
            and j.start_year < postdoc_before
        ):
            cohort.setdefault(j.pi, set()).add(jid)
    if not cohort:
        return None
    without_followup = 0
    for pi, postdoc_ids in cohort.items():
        followed_up = any(
            corpus.projects[jid].start_year <= horizon
            for jid in corpus.projects_by_pi.get(pi, ())
            if jid not in postdoc_ids
        )
        if not followed_up:
            without_followup += 1
    return without_followup / len(cohort)
