# src/sge.py

"""
Simultaneous geometric embedding: several graphs on one vertex set, drawn
with straight edges on one shared point placement. Each graph must be
crossing-free on its own; edges of different graphs may cross.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import networkx as nx
import pandas as pd

from .errors import InputFormatError, MissingVertexError, UnknownVertexError
from .geometry_core import CrossKind, Point, in_open_segment, integer_coordinates, segments_cross

logger = logging.getLogger(__name__)

Edge = frozenset[str]


def edge(a: str, b: str) -> Edge:
    return frozenset((a, b))


@dataclass(frozen=True)
class GraphCollection:
    """Named graphs over a common vertex set; every graph holds all of V as nodes."""

    vertices: tuple[str, ...]
    graphs: Mapping[str, nx.Graph] = field(default_factory=dict)

    @classmethod
    def from_edges(
        cls,
        vertices: Sequence[str],
        graphs: Iterable[tuple[str, Iterable[Sequence[str]]]],
    ) -> "GraphCollection":
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise InputFormatError("Vertex list contains duplicates.")
        known = set(vertices)
        built: dict[str, nx.Graph] = {}
        for name, edges in graphs:
            if name in built:
                raise InputFormatError(f"Duplicate graph name {name!r}.")
            G = nx.Graph(name=name)
            G.add_nodes_from(vertices)
            for pair in edges:
                a, b = pair
                if a == b:
                    raise InputFormatError(f"Graph {name!r} has a loop at {a!r}.")
                for v in (a, b):
                    if v not in known:
                        raise UnknownVertexError(f"Graph {name!r} uses unknown vertex {v!r}.")
                if G.has_edge(a, b):
                    raise InputFormatError(f"Graph {name!r} lists edge {a}-{b} twice.")
                G.add_edge(a, b)
            built[name] = G
        return cls(vertices, built)

    @property
    def names(self) -> list[str]:
        return list(self.graphs)

    def edge_sets(self) -> dict[str, set[Edge]]:
        return {name: {edge(a, b) for a, b in G.edges} for name, G in self.graphs.items()}

    def sub_collection(self, names: Iterable[str]) -> "GraphCollection":
        keep = list(names)
        return GraphCollection(self.vertices, {n: self.graphs[n] for n in keep})


# ---------------------------------------------------------
# Verification
# ---------------------------------------------------------

@dataclass(frozen=True)
class CrossingViolation:
    graph: str
    kind: str  # "proper-crossing", "improper-overlap", "vertex-on-edge", "coincident"
    first: tuple[str, ...]
    second: tuple[str, ...]


@dataclass(frozen=True)
class CrossingReport:
    violations: tuple[CrossingViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def by_graph(self) -> dict[str, list[CrossingViolation]]:
        out: dict[str, list[CrossingViolation]] = defaultdict(list)
        for v in self.violations:
            out[v.graph].append(v)
        return dict(out)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"graph": v.graph, "kind": v.kind, "first": "-".join(v.first), "second": "-".join(v.second)}
            for v in self.violations
        ]
        return pd.DataFrame(rows, columns=["graph", "kind", "first", "second"])


def _integer_points(emb: Mapping[str, Point], names: Sequence[str]) -> dict[str, Point]:
    coords = integer_coordinates(emb[n] for n in names)
    return {n: Point(x, y) for n, (x, y) in zip(names, coords)}


def verify_straightline_planar(
    G: nx.Graph,
    emb: Mapping[str, Point],
    name: str | None = None,
) -> list[CrossingViolation]:
    label = name if name is not None else (G.graph.get("name") or "G")
    nodes = sorted(G.nodes)
    missing = [v for v in nodes if v not in emb]
    if missing:
        raise MissingVertexError(f"Embedding is missing vertices of graph {label!r}: {missing}")

    # common-denominator integers keep every check exact and fast
    pts = _integer_points(emb, nodes)
    violations: list[CrossingViolation] = []

    at: dict[Point, list[str]] = defaultdict(list)
    for v in nodes:
        at[pts[v]].append(v)
    for group in at.values():
        for a, b in combinations(group, 2):
            violations.append(CrossingViolation(label, "coincident", (a,), (b,)))

    edges = sorted(tuple(sorted(e)) for e in G.edges)
    drawable = [(a, b) for a, b in edges if pts[a] != pts[b]]

    for a, b in drawable:
        for v in nodes:
            if v != a and v != b and in_open_segment(pts[v], pts[a], pts[b]):
                violations.append(CrossingViolation(label, "vertex-on-edge", (v,), (a, b)))

    for (a, b), (c, d) in combinations(drawable, 2):
        kind = segments_cross(pts[a], pts[b], pts[c], pts[d])
        # an endpoint inside another edge is already reported as vertex-on-edge
        if kind in (CrossKind.PROPER, CrossKind.OVERLAP):
            violations.append(CrossingViolation(label, kind.value, (a, b), (c, d)))
    return violations


def verify_simultaneous(coll: GraphCollection, emb: Mapping[str, Point]) -> CrossingReport:
    missing = [v for v in coll.vertices if v not in emb]
    if missing:
        raise MissingVertexError(f"Embedding is missing vertices: {missing}")
    violations: list[CrossingViolation] = []
    for name, G in coll.graphs.items():
        violations.extend(verify_straightline_planar(G, emb, name))
    return CrossingReport(tuple(violations))


def is_simultaneous_embedding(coll: GraphCollection, emb: Mapping[str, Point]) -> bool:
    return verify_simultaneous(coll, emb).ok


# ---------------------------------------------------------
# Edge sharing
# ---------------------------------------------------------

@dataclass(frozen=True)
class SharingProfile:
    public: Mapping[Edge, int]
    graph_count: int
    edge_disjoint: bool
    sunflower: bool

    def to_frame(self) -> pd.DataFrame:
        rows = [{"edge": "-".join(sorted(e)), "multiplicity": m} for e, m in sorted(self.public.items(), key=lambda kv: sorted(kv[0]))]
        return pd.DataFrame(rows, columns=["edge", "multiplicity"])


def sharing_profile(coll: GraphCollection) -> SharingProfile:
    counts: Counter[Edge] = Counter()
    for edges in coll.edge_sets().values():
        counts.update(edges)
    public = {e: m for e, m in counts.items() if m >= 2}
    n = len(coll.graphs)
    return SharingProfile(
        public=public,
        graph_count=n,
        edge_disjoint=not public,
        sunflower=all(m == n for m in public.values()),
    )
