# src/constraints.py

"""
Partial order types.

A ConstraintSet stores one representative per unordered triple: the
members sorted by name, with the prescribed value adjusted by the
alternating rule (a 3-cycle keeps the value, a transposition negates it).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import pandas as pd

from .errors import (
    CollinearConstraintUnsupported,
    InconsistentConstraintsError,
    MissingVertexError,
    NotDegenerateError,
    PlacementFailure,
    RepeatedVertexError,
    UnknownVertexError,
)
from .geometry_core import Embedding, Orientation, Point, cross, orient

logger = logging.getLogger(__name__)

Triple = tuple[str, str, str]
Prescription = tuple[Triple, Orientation]


# -------------------------------------------------------------------
# Canonical form
# -------------------------------------------------------------------

def canonical_triple(triple: Sequence[str]) -> tuple[Triple, bool]:
    """Sorted triple plus whether sorting was an odd permutation."""
    items = list(triple)
    odd = False
    # bubble sort on three items, counting swaps
    for i in range(2):
        for j in range(2 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                odd = not odd
    return (items[0], items[1], items[2]), odd


def canonical_value(triple: Sequence[str], value: Orientation) -> tuple[Triple, Orientation]:
    key, odd = canonical_triple(triple)
    return key, (-value if odd else value)


@dataclass(frozen=True)
class Inconsistent:
    """Two prescriptions that cannot both hold under the alternating rule."""

    triple: Triple
    first: Prescription
    second: Prescription

    def describe(self) -> str:
        (t1, v1), (t2, v2) = self.first, self.second
        return f"{t1}->{v1.letter} contradicts {t2}->{v2.letter}"

    def require(self):
        raise InconsistentConstraintsError(self)


@dataclass(frozen=True)
class ConstraintSet:
    universe: tuple[str, ...]
    constraints: Mapping[Triple, Orientation] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints.items())

    def get(self, triple: Sequence[str]) -> Orientation | None:
        key, odd = canonical_triple(triple)
        value = self.constraints.get(key)
        if value is None:
            return None
        return -value if odd else value

    def require(self) -> "ConstraintSet":
        return self

    @property
    def has_collinear(self) -> bool:
        return any(v is Orientation.C for v in self.constraints.values())

    def hypergraph(self) -> "Hypergraph":
        return Hypergraph(
            vertices=self.universe,
            edges=frozenset(frozenset(t) for t in self.constraints),
        )

    def to_frame(self) -> pd.DataFrame:
        rows = [{"a": a, "b": b, "c": c, "orientation": v.letter} for (a, b, c), v in self]
        return pd.DataFrame(rows, columns=["a", "b", "c", "orientation"])


def canonicalize(
    raw: Iterable[Prescription],
    universe: Sequence[str] | None = None,
) -> ConstraintSet | Inconsistent:
    """
    Merge the permutation variants of each unordered triple.

    The result does not depend on the order of `raw`: when several triples
    conflict, the witness is taken from the smallest conflicting triple and
    consists of its two smallest disagreeing prescriptions.
    """
    raw = [(tuple(t), Orientation(v)) for t, v in raw]
    known = set(universe) if universe is not None else None

    grouped: dict[Triple, list[tuple[Orientation, Prescription]]] = {}
    for triple, value in raw:
        if len(triple) != 3 or len(set(triple)) != 3:
            raise RepeatedVertexError(f"Triple {triple} must have three distinct members.")
        if known is not None:
            missing = [v for v in triple if v not in known]
            if missing:
                raise UnknownVertexError(f"Triple {triple} uses vertices outside the universe: {missing}")
        key, normalized = canonical_value(triple, value)
        grouped.setdefault(key, []).append((normalized, (triple, value)))

    constraints: dict[Triple, Orientation] = {}
    for key in sorted(grouped):
        entries = grouped[key]
        values = {v for v, _ in entries}
        if len(values) > 1:
            ordered = sorted(entries, key=lambda e: (e[1][0], e[1][1].value))
            first = ordered[0]
            second = next(e for e in ordered if e[0] != first[0])
            return Inconsistent(key, first[1], second[1])
        constraints[key] = entries[0][0]

    if universe is None:
        names = sorted({v for t in constraints for v in t})
    else:
        names = list(universe)
    return ConstraintSet(tuple(names), constraints)


def from_triples(
    rows: Iterable[Sequence],
    universe: Sequence[str] | None = None,
) -> ConstraintSet | Inconsistent:
    """Build from rows like ("a", "b", "c", "L"); the orientation may be any case."""
    raw = []
    for row in rows:
        if len(row) != 4:
            raise ValueError(f"Constraint row {row!r} must be [a, b, c, orientation].")
        raw.append(((str(row[0]), str(row[1]), str(row[2])), Orientation.parse(row[3])))
    return canonicalize(raw, universe)


def require_consistent(result: ConstraintSet | Inconsistent) -> ConstraintSet:
    return result.require()


# -------------------------------------------------------------------
# Hypergraph and degeneracy
# -------------------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    def __post_init__(self):
        known = set(self.vertices)
        for e in self.edges:
            if len(e) != 3 or not e <= known:
                raise ValueError(f"Hyperedge {sorted(e)} must have 3 vertices from the vertex set.")


@dataclass(frozen=True)
class DegeneracyCertificate:
    k: int
    ordering: tuple[str, ...]
    back_degree: Mapping[str, int]


@dataclass(frozen=True)
class NotKDegenerate:
    k: int
    stuck: tuple[str, ...]  # vertices left when peeling got stuck


def degeneracy_order(h: Hypergraph, k: int) -> DegeneracyCertificate | NotKDegenerate:
    """Greedy peeling; ties go to the lowest vertex name."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")

    alive = set(h.vertices)
    remaining = set(h.edges)
    degree = {v: 0 for v in h.vertices}
    for e in remaining:
        for v in e:
            degree[v] += 1

    removal: list[str] = []
    back_degree: dict[str, int] = {}
    while alive:
        eligible = [v for v in alive if degree[v] <= k]
        if not eligible:
            return NotKDegenerate(k, tuple(sorted(alive)))
        v = min(eligible)
        gone = [e for e in remaining if v in e]
        for e in gone:
            remaining.discard(e)
            for w in e:
                degree[w] -= 1
        back_degree[v] = len(gone)
        alive.discard(v)
        removal.append(v)

    ordering = tuple(reversed(removal))
    return DegeneracyCertificate(k, ordering, {v: back_degree[v] for v in ordering})


# -------------------------------------------------------------------
# Constructive embedding of 2-degenerate sets
# -------------------------------------------------------------------

def _slope(p: Point, q: Point) -> Fraction:
    return Fraction(q.y - p.y) / (q.x - p.x)


class _SlopeBook:
    """Placed points with pairwise distinct x-coordinates and pairwise distinct slopes."""

    def __init__(self):
        self.points: dict[str, Point] = {}
        self.slopes: set[Fraction] = set()
        self.xs: set[Fraction] = set()

    def accepts(self, cand: Point) -> list[Fraction] | None:
        if cand.x in self.xs:
            return None
        new = []
        for p in self.points.values():
            s = _slope(p, cand)
            if s in self.slopes or s in new:
                return None
            new.append(s)
        return new

    def add(self, name: str, cand: Point, new_slopes: list[Fraction]) -> None:
        self.points[name] = cand
        self.xs.add(cand.x)
        self.slopes.update(new_slopes)


def _half_planes(cs: ConstraintSet, v: str, placed: Mapping[str, Point]) -> list[tuple[Point, Point, int]]:
    """Active constraints of v as (p, q, sign) meaning sign(cross(p, q, v)) == sign."""
    planes = []
    for (a, b, c), value in cs:
        if v not in (a, b, c):
            continue
        # rotate the triple so v is last (3-cycles keep the value)
        if v == a:
            p, q = b, c
        elif v == b:
            p, q = c, a
        else:
            p, q = a, b
        if p in placed and q in placed:
            planes.append((placed[p], placed[q], 1 if value is Orientation.L else -1))
    return planes


def _line_intersection(p1: Point, q1: Point, p2: Point, q2: Point) -> Point:
    d1 = q1 - p1
    d2 = q2 - p2
    denom = d1.x * d2.y - d1.y * d2.x
    t = ((p2.x - p1.x) * d2.y - (p2.y - p1.y) * d2.x) / Fraction(denom)
    return Point(p1.x + t * d1.x, p1.y + t * d1.y)


def _candidate_curve(planes, book: _SlopeBook):
    """Return lam -> point; every lam > 0 satisfies all planes strictly."""
    if not planes:
        if not book.points:
            return lambda lam: Point(Fraction(lam - 1), Fraction((lam - 1) ** 2))
        right = max(book.xs)
        return lambda lam: Point(right + lam, Fraction(lam * lam))

    if len(planes) == 1:
        p, q, sign = planes[0]
        d = q - p
        n = Point(-d.y, d.x).scaled(sign)
        mid = Point((p.x + q.x) / 2, (p.y + q.y) / 2)
        return lambda lam: mid + n.scaled(lam) + d.scaled(Fraction(lam * lam, 7))

    (p1, q1, s1), (p2, q2, s2) = planes
    apex = _line_intersection(p1, q1, p2, q2)
    d1 = q1 - p1
    d2 = q2 - p2
    # orient each line's direction into the other's half-plane
    if (cross(p2, q2, apex + d1) > 0) != (s2 > 0):
        d1 = d1.scaled(-1)
    if (cross(p1, q1, apex + d2) > 0) != (s1 > 0):
        d2 = d2.scaled(-1)
    return lambda lam: apex + d1.scaled(Fraction(1, lam)) + d2.scaled(Fraction(1, lam * lam))


def embed_degenerate(cs: ConstraintSet, max_tries: int = 10_000) -> Embedding:
    """
    Realize a 2-degenerate partial order type with strict turns.

    Vertices are placed in degeneracy order. Each new vertex sees at most two
    prescriptions against placed points; candidates come from a parabola
    inside the allowed (open) region, and the first one that keeps all
    slopes and x-coordinates distinct is taken.
    """
    if cs.has_collinear:
        raise CollinearConstraintUnsupported("embed_degenerate handles strict (L/R) prescriptions only.")
    cert = degeneracy_order(cs.hypergraph(), 2)
    if isinstance(cert, NotKDegenerate):
        raise NotDegenerateError(f"Constraint hypergraph is not 2-degenerate; stuck on {list(cert.stuck)}")

    book = _SlopeBook()
    for v in cert.ordering:
        planes = _half_planes(cs, v, book.points)
        curve = _candidate_curve(planes, book)
        for lam in range(1, max_tries + 1):
            cand = curve(lam)
            if any((cross(p, q, cand) > 0) != (s > 0) or cross(p, q, cand) == 0 for p, q, s in planes):
                continue
            new = book.accepts(cand)
            if new is not None:
                book.add(v, cand, new)
                break
        else:
            raise PlacementFailure(f"Could not place vertex {v!r} after {max_tries} candidates.")
        logger.debug("placed %s with %d active constraints", v, len(planes))

    return dict(book.points)


def has_distinct_slopes(emb: Mapping[str, Point]) -> bool:
    pts = list(emb.values())
    xs = [p.x for p in pts]
    if len(set(xs)) != len(xs):
        return False
    slopes = [_slope(p, q) for i, p in enumerate(pts) for q in pts[i + 1:]]
    return len(set(slopes)) == len(slopes)


# -------------------------------------------------------------------
# Verification
# -------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    triple: Triple
    prescribed: Orientation
    actual: Orientation


@dataclass(frozen=True)
class Report:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "triple": " ".join(v.triple),
                "prescribed": v.prescribed.letter,
                "actual": v.actual.letter,
            }
            for v in self.violations
        ]
        return pd.DataFrame(rows, columns=["triple", "prescribed", "actual"])


def verify(cs: ConstraintSet, emb: Mapping[str, Point]) -> Report:
    needed = sorted({v for t in cs.constraints for v in t})
    missing = [v for v in needed if v not in emb]
    if missing:
        raise MissingVertexError(f"Embedding is missing constrained vertices: {missing}")

    violations = []
    for (a, b, c), prescribed in cs:
        actual = orient(emb[a], emb[b], emb[c])
        if actual is not prescribed:
            violations.append(Violation((a, b, c), prescribed, actual))
    return Report(tuple(violations))
