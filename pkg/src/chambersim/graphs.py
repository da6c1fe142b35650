"""Ground-truth causal graphs of the chamber configurations.

Edges live in versioned CSV data files (one per configuration) with a
``mechanism`` column describing the physical effect behind each edge. Nodes
are exactly the registered variables of the configuration, so graph queries,
protocol columns and dataset headers stay consistent by construction.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources

from .variables import Config, Kind, columns_for, variables_for

Edge = tuple[str, str]


@dataclass(frozen=True)
class GroundTruthGraph:
    config: Config
    nodes: tuple[str, ...]
    edges: frozenset[Edge]
    mechanisms: dict[Edge, str] = field(default_factory=dict, compare=False)

    def parents(self, node: str) -> set[str]:
        self._check(node)
        return {a for a, b in self.edges if b == node}

    def children(self, node: str) -> set[str]:
        self._check(node)
        return {b for a, b in self.edges if a == node}

    def has_edge(self, a: str, b: str) -> bool:
        self._check(a)
        self._check(b)
        return (a, b) in self.edges

    def is_acyclic(self) -> bool:
        # Kahn peeling; the pressure-control feedback loop makes it return False.
        indeg = {n: 0 for n in self.nodes}
        for _, b in self.edges:
            indeg[b] += 1
        queue = [n for n, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            n = queue.pop()
            seen += 1
            for child in self.children(n):
                indeg[child] -= 1
                if indeg[child] == 0:
                    queue.append(child)
        return seen == len(self.nodes)

    def _check(self, node: str):
        if node not in self.nodes:
            raise KeyError(f"unknown node {node!r} in {self.config.value} graph")


def _load_edges(config: Config) -> tuple[list[Edge], dict[Edge, str]]:
    name = f"graph_{config.value}.csv"
    text = resources.files("chambersim.data").joinpath(name).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header[:2] != ["from", "to"]:
        raise ValueError(f"{name}: expected 'from,to' header, got {header!r}")
    edges: list[Edge] = []
    mech: dict[Edge, str] = {}
    for row in reader:
        if not row:
            continue
        a, b = row[0], row[1]
        edges.append((a, b))
        if len(row) > 2:
            mech[(a, b)] = row[2]
    return edges, mech


_CACHE: dict[Config, GroundTruthGraph] = {}


def graph_for(config: Config | str) -> GroundTruthGraph:
    """The ground-truth graph of a configuration."""
    config = Config(config)
    if config not in _CACHE:
        edges, mech = _load_edges(config)
        nodes = tuple(columns_for(config))
        node_set = set(nodes)
        for a, b in edges:
            if a not in node_set or b not in node_set:
                raise ValueError(f"edge {a}->{b} references unknown node for {config.value}")
        _CACHE[config] = GroundTruthGraph(config, nodes, frozenset(edges), mech)
    return _CACHE[config]


def known_confounded_pairs(config: Config | str) -> list[tuple[str, str]]:
    """Sensor pairs sharing an unobserved common cause (documentation aid).

    The four wind-tunnel barometers all track the ambient pressure outside the
    chamber, which is not a system variable.
    """
    config = Config(config)
    if config in (Config.WT_STANDARD, Config.WT_PRESSURE_CONTROL):
        baro = ["pressure_upwind", "pressure_downwind", "pressure_ambient", "pressure_intake"]
        return [(a, b) for i, a in enumerate(baro) for b in baro[i + 1:]]
    return []


def edge_precision_recall(estimate: frozenset[Edge] | set[Edge] | list[Edge],
                          truth: GroundTruthGraph | set[Edge] | frozenset[Edge],
                          nodes: tuple[str, ...] | None = None) -> tuple[float, float]:
    """Directed-edge precision and recall of an estimated graph.

    An empty estimate scores precision 1 and recall 0. Estimated edges must
    connect known nodes; offenders are reported by id.
    """
    if isinstance(truth, GroundTruthGraph):
        true_edges = truth.edges
        node_set = set(truth.nodes)
    else:
        true_edges = frozenset(truth)
        node_set = set(nodes) if nodes is not None else None
    est = set()
    for e in estimate:
        a, b = e
        if node_set is not None and (a not in node_set or b not in node_set):
            bad = a if a not in node_set else b
            raise ValueError(f"estimated edge {a}->{b} uses unknown node {bad!r}")
        est.add((a, b))
    hits = len(est & true_edges)
    precision = hits / len(est) if est else 1.0
    recall = hits / len(true_edges) if true_edges else 1.0
    return precision, recall


def export_adjacency_csv(graph: GroundTruthGraph, path) -> None:
    """Write the edge list as a two-column from,to CSV (UTF-8, LF)."""
    lines = ["from,to"] + [f"{a},{b}" for a, b in sorted(graph.edges)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_adjacency_csv(path) -> list[Edge]:
    """Read a from,to edge list, e.g. an estimated graph to score."""
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["from", "to"]:
            raise ValueError(f"{path}: expected a 'from,to' header")
        edges = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise ValueError(f"{path}: line {lineno}: expected two columns")
            edges.append((row[0].strip(), row[1].strip()))
    return edges


def sensor_nodes(config: Config | str) -> list[str]:
    return [v.id for v in variables_for(config) if v.kind is Kind.SENSOR]


def actuator_in_degree_zero(graph: GroundTruthGraph) -> bool:
    """True when no actuator has parents (holds for all non-feedback configs)."""
    actuators = {v.id for v in variables_for(graph.config) if v.kind is not Kind.SENSOR}
    return all(not graph.parents(a) for a in actuators)
