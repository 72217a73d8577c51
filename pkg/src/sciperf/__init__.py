"""Scientific-performance analytics for funded-researcher corpora."""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    Corpus,
    CorpusConfig,
    CorpusError,
    ParseError,
    Project,
    Publication,
    Researcher,
    ValidationError,
    active_projects,
    load_corpus,
    project_counts_series,
    reclassify_postdocs,
)
from .indicators import GroupSelector, YearSeries, indicator_series  # noqa: F401
from .careers import CareerSeries, CareerSpan, career_series, career_span  # noqa: F401
from .netlab import (  # noqa: F401
    AggregateNetwork,
    InvariantRow,
    build_network,
    giant_component,
    invariant_table,
)
from .stats import PairedSeries, correlation_report, pearson  # noqa: F401
