"""Cross-series statistics: Pearson correlations between project activity
and the yearly indicator series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

from .corpus import Corpus, active_projects
from .indicators import INDICATOR_NAMES, GroupSelector, indicator_series

MIN_COMMON_YEARS = 3


class CorrelationError(ValueError):
    """Degenerate input for a correlation (too few points or zero variance)."""


@dataclass(frozen=True)
class PairedSeries:
    """Two year-indexed series restricted to their common defined years."""

    x: Mapping[int, float]
    y: Mapping[int, float]

    @property
    def common_years(self) -> list[int]:
        return sorted(set(self.x) & set(self.y))


@dataclass(frozen=True)
class CorrelationRow:
    indicator: str
    n_years: int
    r: Optional[float]
    note: str = ""


def pearson(pair: PairedSeries) -> float:
    """Product-moment correlation over the common years, in [-1, 1].

    Missing years are dropped pairwise. Raises :class:`CorrelationError`
    below three common points or when either series is constant.
    """
    years = pair.common_years
    if len(years) < MIN_COMMON_YEARS:
        raise CorrelationError(
            f"need at least {MIN_COMMON_YEARS} common years, got {len(years)}"
        )
    xs = [pair.x[y] for y in years]
    ys = [pair.y[y] for y in years]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((v - mx) ** 2 for v in xs)
    syy = sum((v - my) ** 2 for v in ys)
    if sxx == 0 or syy == 0:
        raise CorrelationError("constant series has no defined correlation")
    sxy = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    return max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))


def correlation_report(
    corpus: Corpus, year_range: range, group: Optional[GroupSelector] = None
) -> list[CorrelationRow]:
    """Correlate yearly active-project counts against every indicator series.

    Degenerate pairs are reported with an explanatory note instead of a
    propagated NaN.
    """
    if len(year_range) < MIN_COMMON_YEARS:
        raise CorrelationError(
            f"year range too short for correlations: {len(year_range)} years"
        )
    if group is None:
        group = GroupSelector.all_active()
    project_counts = {
        y: float(len(active_projects(corpus, y))) for y in year_range
    }
    rows = []
    for name in INDICATOR_NAMES:
        series = indicator_series(corpus, group, name, year_range)
        pair = PairedSeries(x=project_counts, y=series.values)
        try:
            rows.append(
                CorrelationRow(indicator=name, n_years=len(pair.common_years), r=pearson(pair))
            )
        except CorrelationError as exc:
            rows.append(
                CorrelationRow(
                    indicator=name, n_years=len(pair.common_years), r=None, note=str(exc)
                )
            )
    return rows
