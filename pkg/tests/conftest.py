import csv
import random
from pathlib import Path

import pytest

from sciperf.corpus import (
    PROJECT_KINDS,
    Corpus,
    CorpusConfig,
    Project,
    Publication,
    Researcher,
)


def random_records(
    rng: random.Random,
    max_researchers: int = 50,
    max_publications: int = 200,
    max_projects: int = 30,
    config: CorpusConfig = CorpusConfig(),
):
    """Well-formed random record lists (no rejected records by construction)."""
    n_r = rng.randint(1, max_researchers)
    researchers = [
        Researcher(f"r{i:03d}", rng.choice(config.fields)) for i in range(n_r)
    ]
    ids = [r.id for r in researchers]
    lo, hi = config.year_bounds

    # Concentrate publication years in a window so co-authorship networks
    # and career spans are non-trivial at small corpus sizes.
    span_lo = rng.randint(lo, hi - 10)
    span_hi = rng.randint(min(span_lo + 10, hi), hi)
    publications = []
    for i in range(rng.randint(0, max_publications)):
        n_authors = rng.randint(0, min(5, n_r))
        authors = rng.sample(ids, n_authors)
        total = max(1, n_authors + rng.randint(0, 3))
        type_code = rng.choice(list(config.scientific_types) + ["popular", "patent"])
        publications.append(
            Publication(
                id=f"p{i:04d}",
                year=rng.randint(span_lo, span_hi),
                type_code=type_code,
                total_author_count=total,
                registered_authors=frozenset(authors),
                is_scientific=False,
            )
        )

    projects = []
    for i in range(rng.randint(0, max_projects)):
        start = rng.randint(max(lo, 1994), hi)
        projects.append(
            Project(
                id=f"j{i:03d}",
                kind=rng.choice(PROJECT_KINDS),
                start_year=start,
                end_year=start + rng.randint(0, 6),
                pi=rng.choice(ids) if rng.random() < 0.8 else None,
            )
        )
    return researchers, publications, projects, config


def build_corpus(records) -> Corpus:
    researchers, publications, projects, config = records
    return Corpus.from_records(researchers, publications, projects, config)


def write_corpus_files(dir_path: Path, records) -> dict[str, Path]:
    """Write record lists as the three CSV input files."""
    researchers, publications, projects, _ = records
    paths = {
        "researchers": dir_path / "researchers.csv",
        "publications": dir_path / "publications.csv",
        "projects": dir_path / "projects.csv",
    }
    with paths["researchers"].open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["id", "main_field"])
        for r in researchers:
            w.writerow([r.id, r.main_field])
    with paths["publications"].open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["id", "year", "type_code", "total_author_count", "registered_author_ids"])
        for p in publications:
            w.writerow(
                [
                    p.id,
                    p.year,
                    p.type_code,
                    p.total_author_count,
                    ";".join(sorted(p.registered_authors)),
                ]
            )
    with paths["projects"].open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["id", "kind_code", "start_year", "end_year", "pi_id"])
        for j in projects:
            w.writerow([j.id, j.kind, j.start_year, j.end_year, j.pi or ""])
    return paths


@pytest.fixture
def rng():
    return random.Random(20230817)


@pytest.fixture
def small_corpus():
    """Hand-built corpus with known indicator values."""
    config = CorpusConfig(fields=("natural_sciences", "engineering", "medical_sciences",
                                  "biotechnical_sciences", "social_sciences", "humanities"))
    researchers = [
        Researcher("a", "natural_sciences"),
        Researcher("b", "engineering"),
        Researcher("c", "medical_sciences"),
        Researcher("d", "natural_sciences"),
        Researcher("e", "social_sciences"),
    ]
    publications = [
        Publication("p1", 2010, "article", 2, frozenset({"a", "b"}), False),
        Publication("p2", 2010, "article", 1, frozenset({"a"}), False),
        Publication("p3", 2010, "article", 4, frozenset({"a", "c"}), False),
        Publication("p4", 2012, "review", 3, frozenset({"b", "c", "d"}), False),
        Publication("p5", 2005, "article", 1, frozenset({"d"}), False),
        Publication("p6", 2012, "popular", 2, frozenset({"e", "a"}), False),
    ]
    projects = [
        Project("j1", "basic", 2009, 2012, "a"),
        Project("j2", "postdoc", 2010, 2012, "b"),
        Project("j3", "programme", 2000, 2005, "d"),
    ]
    return Corpus.from_records(researchers, publications, projects, config)
