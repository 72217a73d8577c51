"""Aggregate co-authorship networks and their invariant suite.

Networks are simple undirected graphs: nodes are researchers with at least
one scientific publication in the period, and two nodes are adjacent when
they are registered co-authors of some scientific publication in the period
(multiplicities collapsed, no self-loops). Every node carries a PI flag
relative to the period end and its main scientific field. All traversals and
serializations use sorted node ids, so results and exports are reproducible
byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional

from .corpus import Corpus

EXPORT_FORMATS = ("edge_list", "graph_interchange")


@dataclass(frozen=True)
class AggregateNetwork:
    period: tuple[int, int]
    adjacency: dict[str, frozenset[str]]
    is_pi: dict[str, bool]
    fields: dict[str, str]

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self.adjacency)

    def edges(self) -> list[tuple[str, str]]:
        out = []
        for u in sorted(self.adjacency):
            for v in sorted(self.adjacency[u]):
                if u < v:
                    out.append((u, v))
        return out

    def degree(self, node: str) -> int:
        return len(self.adjacency[node])


@dataclass(frozen=True)
class InvariantRow:
    start_year: int
    end_year: int
    n_a: int
    n_pi: int
    gamma_gc: float
    n_pi_gc: int
    n_pi_star: int
    alpha_star: Optional[float]
    nu_a: Optional[float]
    nu_pi: Optional[float]
    zeta_cross: int
    zeta_cross_singletons: int
    gamma_cross: float


@dataclass(frozen=True)
class PiSubnetworkSummary:
    gc_share: float
    component_count: int
    isolated_count: int


def build_network(corpus: Corpus, start_year: int, end_year: int) -> AggregateNetwork:
    """Aggregate co-authorship network over [start_year, end_year]."""
    if start_year > end_year:
        raise ValueError(f"reversed period {start_year}-{end_year}")
    adjacency: dict[str, set[str]] = {}
    for year in range(start_year, end_year + 1):
        for pid in corpus.publications_by_year.get(year, ()):
            authors = sorted(corpus.publications[pid].registered_authors)
            for a in authors:
                adjacency.setdefault(a, set())
            for u, v in combinations(authors, 2):
                adjacency[u].add(v)
                adjacency[v].add(u)
    is_pi = {
        node: any(
            corpus.projects[jid].start_year <= end_year
            for jid in corpus.projects_by_pi.get(node, ())
        )
        for node in adjacency
    }
    fields = {node: corpus.researchers[node].main_field for node in adjacency}
    return AggregateNetwork(
        period=(start_year, end_year),
        adjacency={u: frozenset(vs) for u, vs in adjacency.items()},
        is_pi=is_pi,
        fields=fields,
    )


def connected_components(
    adjacency: dict[str, frozenset[str]], nodes: Optional[Iterable[str]] = None
) -> list[frozenset[str]]:
    """Components of the subgraph induced on ``nodes`` (all nodes by default).

    Deterministic: seeds are visited in sorted id order and the result is
    sorted by (-size, smallest id).
    """
    allowed = set(adjacency) if nodes is None else set(nodes)
    seen: set[str] = set()
    components = []
    for seed in sorted(allowed):
        if seed in seen:
            continue
        stack = [seed]
        seen.add(seed)
        comp = {seed}
        while stack:
            node = stack.pop()
            for nb in adjacency[node]:
                if nb in allowed and nb not in seen:
                    seen.add(nb)
                    comp.add(nb)
                    stack.append(nb)
        components.append(frozenset(comp))
    components.sort(key=lambda c: (-len(c), min(c)))
    return components


def giant_component(net: AggregateNetwork) -> frozenset[str]:
    """Largest connected component; size ties broken by smallest contained id."""
    components = connected_components(net.adjacency)
    return components[0] if components else frozenset()


def first_time_pis(
    corpus: Corpus, net: AggregateNetwork, year: int
) -> tuple[int, Optional[float]]:
    """First-time PIs in the giant component and their adjacency to previous PIs.

    A first-time PI is a giant-component member whose earliest project start
    equals ``year``; a previous PI is any researcher with an earlier project
    start, inside or outside the giant component. Returns the count and the
    fraction of first-timers adjacent to a previous PI (None when there are
    no first-timers).
    """
    if year != net.period[1]:
        raise ValueError(f"year {year} must equal the period end {net.period[1]}")
    gc = giant_component(net)
    first_year = corpus.first_project_year
    first_timers = [v for v in gc if first_year.get(v) == year]
    if not first_timers:
        return 0, None
    connected = sum(
        1
        for v in first_timers
        if any(first_year.get(u, year) < year for u in net.adjacency[v])
    )
    return len(first_timers), connected / len(first_timers)


def ego_pi_density(
    net: AggregateNetwork, restrict_to: Iterable[str], min_degree: int = 1
) -> Optional[float]:
    """Mean share of PIs among each node's collaborators.

    Restricted to nodes with degree >= max(min_degree, 1); zero-degree nodes
    are always skipped, never counted as density 0. Undefined on an empty
    eligible set.
    """
    threshold = max(min_degree, 1)
    densities = []
    for node in restrict_to:
        neighbors = net.adjacency[node]
        if len(neighbors) < threshold:
            continue
        densities.append(sum(1 for nb in neighbors if net.is_pi[nb]) / len(neighbors))
    if not densities:
        return None
    return sum(densities) / len(densities)


def remove_backbone(net: AggregateNetwork) -> tuple[int, int, float]:
    """Fragmentation of the giant component after deleting every PI node.

    Returns (component count, singleton count, size of the largest remaining
    component relative to the whole network).
    """
    gc = giant_component(net)
    survivors = {v for v in gc if not net.is_pi[v]}
    components = connected_components(net.adjacency, survivors)
    if not components:
        return 0, 0, 0.0
    singletons = sum(1 for c in components if len(c) == 1)
    return len(components), singletons, len(components[0]) / len(net.adjacency)


def pi_subnetwork(net: AggregateNetwork) -> Optional[PiSubnetworkSummary]:
    """Structure of the subnetwork induced on the PIs of the giant component."""
    gc = giant_component(net)
    pis = {v for v in gc if net.is_pi[v]}
    if not pis:
        return None
    components = connected_components(net.adjacency, pis)
    return PiSubnetworkSummary(
        gc_share=len(components[0]) / len(pis),
        component_count=len(components),
        isolated_count=sum(1 for c in components if len(c) == 1),
    )


def invariant_row(corpus: Corpus, start_year: int, end_year: int) -> Optional[InvariantRow]:
    net = build_network(corpus, start_year, end_year)
    if not net.adjacency:
        return None
    gc = giant_component(net)
    n_a = len(net.adjacency)
    n_pi = sum(1 for v in net.adjacency if net.is_pi[v])
    n_pi_star, alpha_star = first_time_pis(corpus, net, end_year)
    zeta_cross, singletons, gamma_cross = remove_backbone(net)
    return InvariantRow(
        start_year=start_year,
        end_year=end_year,
        n_a=n_a,
        n_pi=n_pi,
        gamma_gc=len(gc) / n_a,
        n_pi_gc=sum(1 for v in gc if net.is_pi[v]),
        n_pi_star=n_pi_star,
        alpha_star=alpha_star,
        nu_a=ego_pi_density(net, sorted(gc), min_degree=1),
        nu_pi=ego_pi_density(net, sorted(v for v in gc if net.is_pi[v]), min_degree=1),
        zeta_cross=zeta_cross,
        zeta_cross_singletons=singletons,
        gamma_cross=gamma_cross,
    )


def invariant_table(
    corpus: Corpus, periods: Iterable[tuple[int, int]]
) -> list[InvariantRow]:
    """One invariant row per period; periods without publications are skipped."""
    rows = []
    for start_year, end_year in periods:
        row = invariant_row(corpus, start_year, end_year)
        if row is not None:
            rows.append(row)
    return rows


def default_periods(corpus: Corpus, first_end: int = 1994) -> list[tuple[int, int]]:
    """Fixed-start growing periods from the corpus lower bound to each end year."""
    lo, hi = corpus.config.year_bounds
    return [(lo, end) for end in range(first_end, hi + 1)]


def export_network(net: AggregateNetwork, path: str | Path, format: str = "edge_list") -> None:
    """Write a deterministic, sorted serialization with node attributes."""
    path = Path(path)
    if format == "edge_list":
        lines = [f"nodes {len(net.adjacency)} attrs is_pi field"]
        for node in sorted(net.adjacency):
            lines.append(f"{node} {int(net.is_pi[node])} {net.fields[node]}")
        edges = net.edges()
        lines.append(f"edges {len(edges)}")
        lines.extend(f"{u} {v}" for u, v in edges)
        payload = "\n".join(lines) + "\n"
    elif format == "graph_interchange":
        # JSON node-link graph, widely parsed (networkx-compatible).
        payload = json.dumps(
            {
                "directed": False,
                "multigraph": False,
                "graph": {"period": list(net.period)},
                "nodes": [
                    {"id": node, "is_pi": net.is_pi[node], "field": net.fields[node]}
                    for node in sorted(net.adjacency)
                ],
                "links": [{"source": u, "target": v} for u, v in net.edges()],
            },
            indent=2,
            sort_keys=True,
        ) + "\n"
    else:
        raise ValueError(f"unknown export format {format!r}")
    try:
        path.write_text(payload, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write network to {path}: {exc}") from exc


def read_network(path: str | Path, format: str = "edge_list") -> AggregateNetwork:
    """Re-import a network written by :func:`export_network`."""
    path = Path(path)
    if format == "edge_list":
        lines = path.read_text(encoding="utf-8").splitlines()
        n_nodes = int(lines[0].split()[1])
        adjacency: dict[str, set[str]] = {}
        is_pi: dict[str, bool] = {}
        fields: dict[str, str] = {}
        for line in lines[1 : 1 + n_nodes]:
            node, flag, fld = line.split()
            adjacency[node] = set()
            is_pi[node] = flag == "1"
            fields[node] = fld
        for line in lines[2 + n_nodes :]:
            u, v = line.split()
            adjacency[u].add(v)
            adjacency[v].add(u)
        period = (0, 0)
    elif format == "graph_interchange":
        data = json.loads(path.read_text(encoding="utf-8"))
        adjacency = {n["id"]: set() for n in data["nodes"]}
        is_pi = {n["id"]: bool(n["is_pi"]) for n in data["nodes"]}
        fields = {n["id"]: n["field"] for n in data["nodes"]}
        for link in data["links"]:
            adjacency[link["source"]].add(link["target"])
            adjacency[link["target"]].add(link["source"])
        period = tuple(data["graph"]["period"])  # type: ignore[assignment]
    else:
        raise ValueError(f"unknown export format {format!r}")
    return AggregateNetwork(
        period=period,
        adjacency={u: frozenset(vs) for u, vs in adjacency.items()},
        is_pi=is_pi,
        fields=fields,
    )
