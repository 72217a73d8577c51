"""Run configuration: defaults, key-value config file, and CLI overrides.

Config files use a minimal ``key = value`` syntax: one assignment per line,
``#`` starts a comment, lists are comma-separated. CLI flags override config
file values, which override built-in defaults. The default config path can
be supplied via the ``SCIPERF_CONFIG`` environment variable.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .corpus import CorpusConfig, DEFAULT_FIELDS, DEFAULT_SCIENTIFIC_TYPES

CONFIG_ENV_VAR = "SCIPERF_CONFIG"


class ConfigError(ValueError):
    """Unparseable or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    researchers: Optional[str] = None
    publications: Optional[str] = None
    projects: Optional[str] = None
    out: str = "out"
    year_from: int = 1970
    year_to: int = 2016
    conor_year: int = 2003
    postdoc_cutoff_year: int = 2007
    postdoc_window_years: int = 7
    scientific_types: tuple[str, ...] = DEFAULT_SCIENTIFIC_TYPES
    fields: tuple[str, ...] = DEFAULT_FIELDS
    groups: tuple[str, ...] = ("all", "pis")
    periods: str = ""  # empty -> default growing periods ending 1994..year_to
    format: str = "csv"
    figures: bool = True
    correlation_from: int = 1994
    correlation_to: Optional[int] = None
    drop_short: int = 3
    stopped_by: Optional[int] = None
    postdoc_before: int = 2011
    horizon: int = 2017

    def corpus_config(self) -> CorpusConfig:
        if self.year_from > self.year_to:
            raise ConfigError(f"year bounds reversed: {self.year_from}-{self.year_to}")
        for era in (self.conor_year, self.postdoc_cutoff_year):
            if not self.year_from <= era <= self.year_to:
                raise ConfigError(
                    f"era parameter {era} outside year bounds "
                    f"{self.year_from}-{self.year_to}"
                )
        return CorpusConfig(
            year_bounds=(self.year_from, self.year_to),
            conor_year=self.conor_year,
            postdoc_cutoff_year=self.postdoc_cutoff_year,
            postdoc_window_years=self.postdoc_window_years,
            scientific_types=self.scientific_types,
            fields=self.fields,
        )

    def corpus_paths(self) -> tuple[str, str, str]:
        missing = [
            name
            for name, value in (
                ("researchers", self.researchers),
                ("publications", self.publications),
                ("projects", self.projects),
            )
            if not value
        ]
        if missing:
            raise ConfigError(f"missing corpus paths: {', '.join(missing)}")
        return self.researchers, self.publications, self.projects  # type: ignore[return-value]

    def parsed_periods(self) -> list[tuple[int, int]]:
        """Period spec: comma list of ``start-end`` or ``start-endA..endB`` ranges."""
        if not self.periods:
            return [(self.year_from, end) for end in range(1994, self.year_to + 1)]
        out = []
        for token in self.periods.split(","):
            token = token.strip()
            try:
                start, rest = token.split("-", 1)
                if ".." in rest:
                    end_a, end_b = rest.split("..", 1)
                    out.extend(
                        (int(start), end) for end in range(int(end_a), int(end_b) + 1)
                    )
                else:
                    out.append((int(start), int(rest)))
            except ValueError:
                raise ConfigError(f"bad period spec {token!r}") from None
        for start, end in out:
            if start > end:
                raise ConfigError(f"reversed period {start}-{end}")
        return out


_LIST_KEYS = {"scientific_types", "fields", "groups"}
_INT_KEYS = {
    "year_from",
    "year_to",
    "conor_year",
    "postdoc_cutoff_year",
    "postdoc_window_years",
    "correlation_from",
    "correlation_to",
    "drop_short",
    "stopped_by",
    "postdoc_before",
    "horizon",
}
_BOOL_KEYS = {"figures"}


def parse_config_file(path: str | Path) -> dict:
    """Parse a key-value config file into typed override values."""
    path = Path(path)
    known = {f.name for f in fields(RunConfig)}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        value = value.strip("\"'")
        try:
            if key in _LIST_KEYS:
                values[key] = tuple(v.strip() for v in value.split(",") if v.strip())
            elif key in _INT_KEYS:
                values[key] = int(value)
            elif key in _BOOL_KEYS:
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(value)
                values[key] = value.lower() in ("true", "1", "yes")
            else:
                values[key] = value
        except ValueError:
            raise ConfigError(f"{path}:{line_no}: bad value for {key}: {value!r}") from None
    return values


def build_run_config(config_path: Optional[str], **cli_overrides) -> RunConfig:
    """Defaults, then config file, then CLI flags (None flags mean unset)."""
    cfg = RunConfig()
    if config_path:
        cfg = replace(cfg, **parse_config_file(config_path))
    overrides = {k: v for k, v in cli_overrides.items() if v is not None and v != ()}
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg
