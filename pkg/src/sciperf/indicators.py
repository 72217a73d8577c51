"""Yearly performance indicators for arbitrary researcher groups.

Four indicator families are covered: productivity (plain and fractional),
collaboration (all/registered collaborators, solo publications),
internationality (publication and researcher level) and interdisciplinarity
(publication and researcher level). All functions are pure over an immutable
corpus; group means use the productive subset of the group for the year and
an empty productive subset yields an omitted point, never zero.

Unregistered co-authors carry no identity in the record format, so they are
counted per publication slot and never deduplicated across publications.
Fractional publication counts divide by the total author count (registered
plus unregistered), not the registered count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .corpus import Corpus, Publication


class EraError(ValueError):
    """Researcher-level internationality requested before complete author lists exist."""


class UnknownIndicatorError(ValueError):
    """Indicator name not in the series registry."""


@dataclass(frozen=True)
class GroupSelector:
    """Selects a researcher group; the resolved group is always a subset of A."""

    mode: str  # all_active | pis | pis_by_kind | explicit
    kinds: frozenset[str] = frozenset()
    ids: frozenset[str] = frozenset()

    @classmethod
    def all_active(cls) -> "GroupSelector":
        return cls("all_active")

    @classmethod
    def all_pis(cls) -> "GroupSelector":
        return cls("pis")

    @classmethod
    def pis_by_kind(cls, kinds: Iterable[str]) -> "GroupSelector":
        return cls("pis_by_kind", kinds=frozenset(kinds))

    @classmethod
    def explicit(cls, ids: Iterable[str]) -> "GroupSelector":
        return cls("explicit", ids=frozenset(ids))

    @property
    def label(self) -> str:
        if self.mode == "all_active":
            return "all"
        if self.mode == "pis":
            return "pis"
        if self.mode == "pis_by_kind":
            return "pis:" + "+".join(sorted(self.kinds))
        return "explicit"

    def resolve(self, corpus: Corpus) -> frozenset[str]:
        if self.mode == "all_active":
            return corpus.active
        if self.mode == "pis":
            return corpus.pis
        if self.mode == "pis_by_kind":
            members = set()
            for pi in corpus.pis:
                for jid in corpus.projects_by_pi.get(pi, ()):
                    j = corpus.projects[jid]
                    if j.kind not in self.kinds:
                        continue
                    # The postdoc subgroup is gated on the reclassification flag.
                    if j.kind == "postdoc" and not j.postdoc_subgroup:
                        continue
                    members.add(pi)
                    break
            return frozenset(members)
        if self.mode == "explicit":
            return self.ids & corpus.active
        raise ValueError(f"unknown group mode {self.mode!r}")


@dataclass
class YearSeries:
    """A per-year indicator with the contributing population size per year."""

    indicator_name: str
    values: dict[int, float] = field(default_factory=dict)
    population: dict[int, int] = field(default_factory=dict)


def _mean(values: list[float]) -> Optional[float]:
    if not values:
        return None
    return sum(values) / len(values)


def publication_count(corpus: Corpus, researcher: str, year: int) -> int:
    return len(corpus.scientific_publications(researcher, year))


def fractional_count(corpus: Corpus, researcher: str, year: int) -> float:
    return sum(
        1.0 / p.total_author_count
        for p in corpus.scientific_publications(researcher, year)
    )


def registered_coauthors(corpus: Corpus, researcher: str, year: int) -> frozenset[str]:
    """Distinct registered co-authors across the researcher's publications, self excluded."""
    names: set[str] = set()
    for p in corpus.scientific_publications(researcher, year):
        names.update(p.registered_authors)
    names.discard(researcher)
    return frozenset(names)


def unregistered_slots(corpus: Corpus, researcher: str, year: int) -> int:
    """Unregistered co-author slots summed per publication (not deduplicable)."""
    return sum(
        p.total_author_count - len(p.registered_authors)
        for p in corpus.scientific_publications(researcher, year)
    )


def collaborator_count(
    corpus: Corpus, researcher: str, year: int, registered_only: bool
) -> float:
    registered = len(registered_coauthors(corpus, researcher, year))
    if registered_only:
        return float(registered)
    return float(registered + unregistered_slots(corpus, researcher, year))


def solo_count(corpus: Corpus, researcher: str, year: int) -> int:
    return sum(
        1
        for p in corpus.scientific_publications(researcher, year)
        if p.total_author_count == 1
    )


def publication_internationality(pub: Publication) -> float:
    """Proportion of unregistered (assumed international) authors of a publication."""
    if pub.total_author_count < 1:
        raise ValueError(f"publication {pub.id} has no authors")
    return (pub.total_author_count - len(pub.registered_authors)) / pub.total_author_count


def researcher_internationality(
    corpus: Corpus, researcher: str, year: int
) -> Optional[float]:
    """International co-author slots over all co-authors for the year.

    Only defined from the configured CONOR year on, when author lists are
    complete. Undefined (None) when the researcher has no co-authors that
    year.
    """
    if year < corpus.config.conor_year:
        raise EraError(
            f"researcher internationality needs complete author lists "
            f"(year {year} < {corpus.config.conor_year})"
        )
    international = unregistered_slots(corpus, researcher, year)
    total = international + len(registered_coauthors(corpus, researcher, year))
    if total == 0:
        return None
    return international / total


def researcher_interdisciplinarity(
    corpus: Corpus, researcher: str, year: int
) -> Optional[float]:
    """Share of foreign fields covered by registered co-authors.

    Distinct main fields among registered co-authors, excluding the focal
    researcher's own field, normalized by the number of other fields in the
    taxonomy. Undefined with zero registered co-authors.
    """
    coauthors = registered_coauthors(corpus, researcher, year)
    if not coauthors:
        return None
    own = corpus.researchers[researcher].main_field
    foreign = {
        corpus.researchers[c].main_field
        for c in coauthors
        if corpus.researchers[c].main_field != own
    }
    return len(foreign) / (len(corpus.config.fields) - 1)


def publication_interdisciplinarity(
    corpus: Corpus, pub: Publication
) -> Optional[float]:
    """Field diversity of a publication's registered authors, in [0, 1]."""
    if not pub.registered_authors:
        return None
    fields = {corpus.researchers[a].main_field for a in pub.registered_authors}
    return (len(fields) - 1) / (len(corpus.config.fields) - 1)


def _productive_members(
    corpus: Corpus, group: frozenset[str], year: int
) -> frozenset[str]:
    return group & corpus.productive_by_year.get(year, frozenset())


def _researcher_mean(
    corpus: Corpus,
    group: frozenset[str],
    year: int,
    value: Callable[[str], Optional[float]],
) -> Optional[tuple[float, int]]:
    values = []
    for r in _productive_members(corpus, group, year):
        v = value(r)
        if v is not None:
            values.append(float(v))
    if not values:
        return None
    return sum(values) / len(values), len(values)


def _publication_mean(
    corpus: Corpus,
    group: frozenset[str],
    year: int,
    value: Callable[[Publication], Optional[float]],
) -> Optional[tuple[float, int]]:
    values = []
    for pid in corpus.publications_by_year.get(year, ()):
        pub = corpus.publications[pid]
        if not pub.registered_authors & group:
            continue
        v = value(pub)
        if v is not None:
            values.append(float(v))
    if not values:
        return None
    return sum(values) / len(values), len(values)


def productivity(corpus: Corpus, group: GroupSelector, year: int) -> Optional[float]:
    """Average publication count per productive group member."""
    out = _researcher_mean(
        corpus, group.resolve(corpus), year, lambda r: publication_count(corpus, r, year)
    )
    return None if out is None else out[0]


def fractional_productivity(
    corpus: Corpus, group: GroupSelector, year: int
) -> Optional[float]:
    """Average fractional publication count per productive group member."""
    out = _researcher_mean(
        corpus, group.resolve(corpus), year, lambda r: fractional_count(corpus, r, year)
    )
    return None if out is None else out[0]


def collaborators(
    corpus: Corpus, group: GroupSelector, year: int, registered_only: bool
) -> Optional[float]:
    """Average number of (registered) collaborators per productive group member."""
    out = _researcher_mean(
        corpus,
        group.resolve(corpus),
        year,
        lambda r: collaborator_count(corpus, r, year, registered_only),
    )
    return None if out is None else out[0]


def solo_publications(
    corpus: Corpus, group: GroupSelector, year: int
) -> Optional[float]:
    """Average number of single-author publications per productive group member."""
    out = _researcher_mean(
        corpus, group.resolve(corpus), year, lambda r: solo_count(corpus, r, year)
    )
    return None if out is None else out[0]


def _series_fn(name: str):
    """(corpus, resolved group, year) -> (value, population) or None."""

    def researcher_level(value):
        def fn(corpus, group, year):
            return _researcher_mean(corpus, group, year, lambda r: value(corpus, r, year))

        return fn

    def publication_level(value):
        def fn(corpus, group, year):
            return _publication_mean(corpus, group, year, lambda p: value(corpus, p))

        return fn

    def internationality(corpus, group, year):
        if year < corpus.config.conor_year:
            return None
        return _researcher_mean(
            corpus, group, year, lambda r: researcher_internationality(corpus, r, year)
        )

    registry = {
        "productivity": researcher_level(publication_count),
        "fractional_productivity": researcher_level(fractional_count),
        "collaborators_all": researcher_level(
            lambda c, r, y: collaborator_count(c, r, y, registered_only=False)
        ),
        "collaborators_registered": researcher_level(
            lambda c, r, y: collaborator_count(c, r, y, registered_only=True)
        ),
        "solo_publications": researcher_level(solo_count),
        "researcher_internationality": internationality,
        "researcher_interdisciplinarity": researcher_level(
            researcher_interdisciplinarity
        ),
        "publication_internationality": publication_level(
            lambda c, p: publication_internationality(p)
        ),
        "publication_interdisciplinarity": publication_level(
            publication_interdisciplinarity
        ),
    }
    if name not in registry:
        raise UnknownIndicatorError(
            f"unknown indicator {name!r}; expected one of {sorted(registry)}"
        )
    return registry[name]


INDICATOR_NAMES = (
    "productivity",
    "fractional_productivity",
    "collaborators_all",
    "collaborators_registered",
    "solo_publications",
    "researcher_internationality",
    "publication_internationality",
    "researcher_interdisciplinarity",
    "publication_interdisciplinarity",
)


def indicator_series(
    corpus: Corpus,
    group: GroupSelector,
    indicator: str,
    year_range: Iterable[int],
) -> YearSeries:
    """Lift an indicator to a per-year series over the group; undefined years omitted."""
    fn = _series_fn(indicator)
    resolved = group.resolve(corpus)
    series = YearSeries(indicator_name=indicator)
    for year in year_range:
        out = fn(corpus, resolved, year)
        if out is None:
            continue
        series.values[year] = out[0]
        series.population[year] = out[1]
    return series
