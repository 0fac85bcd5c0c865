# src/sge_reduction.py

"""
From a directional walk to an edge-disjoint SGE instance.

Graph G_i encodes turn i: a K4 on (u_i, u_{i+1}, u_{i+2}, d_i) with two
subdivided edges traps u_{i+2} inside T = (u_i, u_{i+1}, d_i), and the
triangle a_i b_i c_i hanging from the frame x, y, z fixes the orientation
of T. A primed copy of everything lets one of p, p' sit outside the frame
triangle. G_frame (triangle xyz plus stars at p and p') forces all
non-primed vertices into the frame triangle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, NamedTuple, Sequence

import networkx as nx
import pandas as pd

from .errors import (
    DegenerateTripleError,
    LengthMismatchError,
    PlacementFailure,
    RealizationInvalidError,
    SimultaneityViolation,
    SoundnessViolation,
)
from .geometry_core import (
    AffineMap,
    Embedding,
    Orientation,
    Point,
    Region,
    cross,
    orient,
    perturb_generic,
    point_in_triangle,
)
from .sge import GraphCollection, verify_simultaneous, verify_straightline_planar
from .utils import bounding_box, check_fresh, restrict
from .walk import DirectionalWalk, realizes, verify_walk_realization

logger = logging.getLogger(__name__)

ROLES = ("a", "b", "c", "d", "e", "f")
FRAME_GRAPH = "G_frame"

X_POS = Point(Fraction(-1), Fraction(2))
Y_POS = Point(Fraction(-1), Fraction(-2))
Z_POS = Point(Fraction(1), Fraction(0))
P_PRIME_POS = Point(Fraction(2), Fraction(0))
P_POS = Point(Fraction(-1, 2), Fraction(1, 3))

# half-widths tried for the normalized walk realization
NORMALIZATION_SCALES = (Fraction(1, 128), Fraction(1, 1024))

# step halvings tried for each primed triangle, and primed-copy rotations tried
OUTER_STEP_HALVINGS = 64
PRIMED_COPY_ATTEMPTS = 4


def prime(name: str) -> str:
    return f"{name}'"


class FrameNames(NamedTuple):
    x: str = "frame.x"
    y: str = "frame.y"
    z: str = "frame.z"
    p: str = "frame.p"
    p_prime: str = "frame.p'"


class SgeGadgetNames(NamedTuple):
    index: int
    a: str
    b: str
    c: str
    d: str
    e: str
    f: str

    @classmethod
    def for_index(cls, i: int, primed: bool = False) -> "SgeGadgetNames":
        tick = "'" if primed else ""
        return cls(i, *(f"{role}{tick}.{i}" for role in ROLES))

    @property
    def dummies(self) -> tuple[str, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)


@dataclass(frozen=True)
class SgeInstanceRecord:
    source: DirectionalWalk
    collection: GraphCollection
    gadgets: tuple[SgeGadgetNames, ...]
    primed_gadgets: tuple[SgeGadgetNames, ...]
    walk_primes: Mapping[str, str]
    frame: FrameNames = FrameNames()

    def swap_map(self) -> dict[str, str]:
        """Primed <-> non-primed relabeling; x, y, z stay fixed."""
        pairs = [(self.frame.p, self.frame.p_prime)]
        pairs += list(self.walk_primes.items())
        for g, gp in zip(self.gadgets, self.primed_gadgets):
            pairs += list(zip(g.dummies, gp.dummies))
        out = {}
        for a, b in pairs:
            out[a], out[b] = b, a
        return out


@dataclass(frozen=True)
class ExtractionNormalization:
    primed_swapped: bool
    reflected: bool


# ---------------------------------------------------------
# Instance construction
# ---------------------------------------------------------

def _gadget_edges(g: SgeGadgetNames, u0: str, u1: str, u2: str, turn: Orientation, fr: FrameNames) -> list[tuple[str, str]]:
    edges = [(fr.x, g.a), (fr.y, g.b), (fr.z, g.c), (g.a, g.b), (g.a, g.c), (g.b, g.c)]
    if turn is Orientation.L:
        edges += [(g.a, u0), (g.b, u1)]
    else:
        edges += [(g.a, u1), (g.b, u0)]
    edges += [
        (g.c, g.d),
        (u0, u1), (u0, g.d), (u1, g.d),
        (u0, g.e), (u1, g.f),
        (u2, g.d), (u2, g.e), (u2, g.f),
    ]
    return edges


def build_sge_instance(w: DirectionalWalk) -> SgeInstanceRecord:
    if w.t < 3:
        raise LengthMismatchError(f"Walk of length {w.t} has no turns to encode; need t >= 3.")
    for i, ((a, _, c), _) in enumerate(w.triples()):
        if a == c:
            raise DegenerateTripleError(f"Positions {i + 1} and {i + 3} are both {a!r}.")

    fr = FrameNames()
    gadgets = tuple(SgeGadgetNames.for_index(i + 1) for i in range(w.t - 2))
    primed = tuple(SgeGadgetNames.for_index(i + 1, primed=True) for i in range(w.t - 2))
    walk_primes = {u: prime(u) for u in w.vertices}

    generated = list(fr) + list(walk_primes.values())
    generated += [n for g in gadgets + primed for n in g.dummies]
    check_fresh(generated, w.vertices)

    vertices = (
        [fr.x, fr.y, fr.z, fr.p, fr.p_prime]
        + list(w.vertices)
        + [walk_primes[u] for u in w.vertices]
        + [n for g, gp in zip(gadgets, primed) for n in g.dummies + gp.dummies]
    )

    graphs = []
    s = w.sequence
    for k, (g, gp, turn) in enumerate(zip(gadgets, primed, w.turns)):
        u0, u1, u2 = s[k], s[k + 1], s[k + 2]
        edges = _gadget_edges(g, u0, u1, u2, turn, fr)
        edges += _gadget_edges(gp, walk_primes[u0], walk_primes[u1], walk_primes[u2], turn, fr)
        graphs.append((f"G_{g.index}", edges))

    frame_edges = [(fr.x, fr.y), (fr.y, fr.z), (fr.z, fr.x)]
    inner = [n for g in gadgets for n in g.dummies] + list(w.vertices) + [fr.x, fr.y, fr.z]
    frame_edges += [(fr.p, v) for v in inner]
    outer = [n for g in primed for n in g.dummies] + [fr.x, fr.y, fr.z]
    frame_edges += [(fr.p_prime, v) for v in outer]
    graphs.append((FRAME_GRAPH, frame_edges))

    coll = GraphCollection.from_edges(vertices, graphs)
    logger.debug("build_sge_instance: |V|=%d, %d graphs", len(vertices), len(coll.graphs))
    return SgeInstanceRecord(w, coll, gadgets, primed, walk_primes, fr)


# ---------------------------------------------------------
# Forward embedding
# ---------------------------------------------------------

def _normalize(R: Mapping[str, Point], names: Sequence[str], half_width: Fraction) -> Embedding:
    pts = restrict(R, names)
    min_x, min_y, max_x, max_y = bounding_box(pts)
    span = max(max_x - min_x, max_y - min_y)
    center = Point((min_x + max_x) / 2, (min_y + max_y) / 2)
    to_square = AffineMap.translation(-center.x, -center.y).then(AffineMap.scaling(half_width / span))
    return to_square.apply(pts)


def _exit_parameter(o: Point, v: Point) -> Fraction:
    """Smallest t > 0 with o + t v on the boundary of the frame triangle."""
    best = None
    for P, Q in ((X_POS, Y_POS), (Y_POS, Z_POS), (Z_POS, X_POS)):
        denom = (Q.x - P.x) * v.y - (Q.y - P.y) * v.x
        if denom == 0:
            continue
        t = -cross(P, Q, o) / denom
        if t > 0 and (best is None or t < best):
            best = t
    if best is None:
        raise PlacementFailure(f"Direction {v} never leaves the frame triangle from {o}.")
    return best


def _pinwheel_schedule() -> Iterator[Fraction]:
    yield Fraction(0)
    for j in range(1, 49):
        yield Fraction(j, 32)
        yield Fraction(-j, 32)


def _abc_candidates(o: Point, corners: Sequence[Point]) -> Iterator[tuple[Point, Point, Point]]:
    # rays from o through the corners of T
    for delta in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4)):
        yield tuple(K + (K - o).scaled(delta) for K in corners)
    etas = (Fraction(1, 8), Fraction(1, 32))
    for eta in etas:
        yield tuple(o + (K - o).scaled((1 - eta) * _exit_parameter(o, K - o)) for K in corners)
    # the same rays turned so each point faces its frame corner
    for q in _pinwheel_schedule():
        turn = AffineMap.rational_rotation(q)
        dirs = [turn(X - o) for X in (X_POS, Y_POS, Z_POS)]
        for eta in etas:
            yield tuple(o + v.scaled((1 - eta) * _exit_parameter(o, v)) for v in dirs)


def _subgraph_ok(edges: Sequence[tuple[str, str]], pts: Mapping[str, Point]) -> bool:
    G = nx.Graph()
    G.add_nodes_from(pts)
    G.add_edges_from(edges)
    return not verify_straightline_planar(G, pts)


def _place_inner_gadget(
    k: int,
    g: SgeGadgetNames,
    u: tuple[str, str, str],
    turn: Orientation,
    emb: Mapping[str, Point],
    fr: FrameNames,
) -> dict[str, Point]:
    p0, p1, p2 = (emb[n] for n in u)
    share = Fraction(k + 1, 2 * k + 3)
    e = p2 + (p0 - p2).scaled(share)
    f = p2 + (p1 - p2).scaled(share)
    mid = Point((p0.x + p1.x) / 2, (p0.y + p1.y) / 2)
    # u_{i+2} lies on the open segment from mid to d, hence inside T
    d = p2 + (p2 - mid).scaled(Fraction(1, k + 2))

    if turn is Orientation.L:
        corners = (p0, p1, d)
    else:
        corners = (p1, p0, d)
    o = Point(sum(c.x for c in corners) / 3, sum(c.y for c in corners) / 3)

    edges = _gadget_edges(g, *u, turn, fr)
    base = {u[0]: p0, u[1]: p1, u[2]: p2, g.d: d, g.e: e, g.f: f, fr.x: X_POS, fr.y: Y_POS, fr.z: Z_POS}
    for a, b, c in _abc_candidates(o, corners):
        if orient(a, b, c) is not Orientation.L:
            continue
        if any(point_in_triangle(q, X_POS, Y_POS, Z_POS) is not Region.INTERIOR for q in (a, b, c)):
            continue
        pts = dict(base)
        pts.update({g.a: a, g.b: b, g.c: c})
        if _subgraph_ok(edges, pts):
            return {g.a: a, g.b: b, g.c: c, g.d: d, g.e: e, g.f: f}
    raise PlacementFailure(f"No verified placement for a, b, c of gadget {g.index}.")


def _primed_copy_map(pre: Sequence[Point], first_k: int = 1, margin: Fraction = Fraction(3)) -> tuple[AffineMap, int]:
    """Mirror, rotate until y-coordinates are distinct, translate right of the frame."""
    mirror = AffineMap.mirror_x()
    distinct = sorted(set(pre))  # coincident points are separated later by perturbation
    for k in range(first_k, first_k + 10_000):
        turned = mirror.then(AffineMap.rational_rotation(Fraction(1, k)))
        ys = [turned(p).y for p in distinct]
        if len(set(ys)) == len(ys):
            break
    else:
        raise PlacementFailure("No rotation separates the primed copy into distinct rows.")

    moved = [turned(p) for p in distinct]
    reach = Fraction(0)
    for P, Q in combinations(moved, 2):
        for Y in (Fraction(2), Fraction(-2)):
            X = P.x + (Y - P.y) * (Q.x - P.x) / (Q.y - P.y)
            reach = max(reach, abs(X))
    return turned.then(AffineMap.translation(reach + margin, 0)), k


def _clockwise_corners(tri: Sequence[Point]) -> tuple[Point, Point, Point]:
    """Topmost corner first, then clockwise."""
    top = max(range(3), key=lambda i: tri[i].y)
    K2, K3 = (tri[i] for i in range(3) if i != top)
    top = tri[top]
    if orient(top, K2, K3) is not Orientation.R:
        K2, K3 = K3, K2
    return top, K2, K3


def _halvings(start: Fraction) -> Iterator[Fraction]:
    for j in range(OUTER_STEP_HALVINGS):
        yield start / 2**j


def _on_horizontal(K: Point, v: Point, Y: Fraction) -> Point:
    return K + v.scaled((Y - K.y) / v.y)


def _outer_base(K1: Point, K2: Point, K3: Point) -> Point:
    """b' on y = -2, on a ray from inside T' through its second corner, right of the frame."""
    # w -> 0 tends to the line K1K2, which meets y = -2 right of the frame
    for w in _halvings(Fraction(1)):
        v = (K2 - K1) + (K2 - K3).scaled(w)
        if v.y >= 0:
            continue
        b = _on_horizontal(K2, v, Fraction(-2))
        if b.x > 1:
            return b
    raise PlacementFailure("No ray through the second corner meets y = -2 right of the frame.")


def _outer_candidates(K1: Point, K2: Point, K3: Point) -> Iterator[tuple[Point, Point, Point]]:
    b = _outer_base(K1, K2, K3)
    for w1 in (Fraction(1), Fraction(1, 4), Fraction(4)):
        # both K1 - K2 and K1 - K3 point up, so a' lands between two lines through S
        a = _on_horizontal(K1, (K1 - K2) + (K1 - K3).scaled(w1), Fraction(2))
        v3 = (K3 - K1) + (K3 - K2)
        for eps in _halvings(Fraction(1, 4)):
            yield a, b, K3 + v3.scaled(eps)


def _place_outer_gadget(
    g: SgeGadgetNames,
    u: tuple[str, str, str],
    turn: Orientation,
    emb: Mapping[str, Point],
    fr: FrameNames,
) -> dict[str, Point]:
    """
    a', b', c' go into the three cones opposite the corners of T' = (d', u'_i, u'_{i+1}),
    topmost corner first and then clockwise, with a' on y = 2 and b' on y = -2.
    """
    K1, K2, K3 = _clockwise_corners((emb[g.d], emb[u[0]], emb[u[1]]))
    edges = _gadget_edges(g, *u, turn, fr)
    base = {n: emb[n] for n in (*u, g.d, g.e, g.f)}
    base.update({fr.x: X_POS, fr.y: Y_POS, fr.z: Z_POS})

    for a, b, c in _outer_candidates(K1, K2, K3):
        if orient(a, b, c) is not Orientation.R or min(a.x, b.x, c.x) <= 1:
            continue
        pts = dict(base)
        pts.update({g.a: a, g.b: b, g.c: c})
        if _subgraph_ok(edges, pts):
            return {g.a: a, g.b: b, g.c: c}
    raise PlacementFailure(f"No verified placement for the primed triangle of gadget {g.index}.")


def _place_primed(rec: SgeInstanceRecord, emb: Embedding) -> Embedding:
    """S copies the non-primed positions outside the frame; then every a', b', c' is placed."""
    w, fr = rec.source, rec.frame
    s, wp = w.sequence, rec.walk_primes
    originals = list(w.vertices) + [n for g in rec.gadgets for n in (g.d, g.e, g.f)]
    copies = [wp[u] for u in w.vertices]
    copies += [n for g in rec.primed_gadgets for n in (g.d, g.e, g.f)]
    pre = [emb[n] for n in originals]

    k, margin = 1, Fraction(3)
    last_error: PlacementFailure | None = None
    for _ in range(PRIMED_COPY_ATTEMPTS):
        to_outside, k = _primed_copy_map(pre, first_k=k, margin=margin)
        out = dict(emb)
        for src, dst in zip(originals, copies):
            out[dst] = to_outside(out[src])
        try:
            for i, (gp, turn) in enumerate(zip(rec.primed_gadgets, w.turns)):
                u = (wp[s[i]], wp[s[i + 1]], wp[s[i + 2]])
                out.update(_place_outer_gadget(gp, u, turn, out, fr))
            return out
        except PlacementFailure as exc:
            logger.info("embed_sge_instance: primed copy with k=%d failed (%s); turning further", k, exc)
            last_error = exc
            k, margin = k + 1, 2 * margin
    raise last_error


def _construct(rec: SgeInstanceRecord, R: Mapping[str, Point], half_width: Fraction) -> Embedding:
    w, fr = rec.source, rec.frame
    emb: Embedding = _normalize(R, w.vertices, half_width)
    emb.update({fr.x: X_POS, fr.y: Y_POS, fr.z: Z_POS, fr.p: P_POS, fr.p_prime: P_PRIME_POS})

    s = w.sequence
    for k, (g, turn) in enumerate(zip(rec.gadgets, w.turns)):
        emb.update(_place_inner_gadget(k, g, (s[k], s[k + 1], s[k + 2]), turn, emb, fr))
    return _place_primed(rec, emb)


def embed_sge_instance(rec: SgeInstanceRecord, R: Mapping[str, Point], *, perturb: bool = True) -> Embedding:
    report = verify_walk_realization(rec.source, R)
    if report:
        raise RealizationInvalidError(
            f"Embedding does not realize the input walk ({len(report)} wrong turns)."
        )

    last_error: PlacementFailure | None = None
    for half_width in NORMALIZATION_SCALES:
        try:
            emb = _construct(rec, R, half_width)
            break
        except PlacementFailure as exc:
            logger.info("embed_sge_instance: scale %s failed (%s); shrinking", half_width, exc)
            last_error = exc
    else:
        raise last_error

    def valid(candidate: Embedding) -> bool:
        return verify_simultaneous(rec.collection, candidate).ok

    if perturb:
        emb = perturb_generic(emb, valid)
    if not valid(emb):
        raise PlacementFailure("Constructed embedding is not a simultaneous embedding.")
    logger.info("embed_sge_instance: %d vertices placed", len(emb))
    return emb


# ---------------------------------------------------------
# Backward direction
# ---------------------------------------------------------

def frame_side(rec: SgeInstanceRecord, emb: Mapping[str, Point]) -> str:
    """Which of p, p' lies inside triangle xyz: 'p', "p'", 'both' or 'neither'."""
    fr = rec.frame
    tri = (emb[fr.x], emb[fr.y], emb[fr.z])
    p_in = point_in_triangle(emb[fr.p], *tri) is Region.INTERIOR
    q_in = point_in_triangle(emb[fr.p_prime], *tri) is Region.INTERIOR
    if p_in and q_in:
        return "both"
    if p_in:
        return "p"
    if q_in:
        return "p'"
    return "neither"


def normalize_embedding(rec: SgeInstanceRecord, emb: Mapping[str, Point]) -> tuple[Embedding, ExtractionNormalization]:
    """Swap primed labels if p is outside xyz, then reflect so that orient(x, y, z) = l."""
    fr = rec.frame
    out = dict(emb)
    swapped = frame_side(rec, out) != "p"
    if swapped:
        swap = rec.swap_map()
        out = {swap.get(name, name): pt for name, pt in out.items()}
    reflected = orient(out[fr.x], out[fr.y], out[fr.z]) is Orientation.R
    if reflected:
        out = AffineMap.mirror_x().apply(out)
    return out, ExtractionNormalization(swapped, reflected)


def extract_walk_realization(
    rec: SgeInstanceRecord,
    emb: Mapping[str, Point],
) -> tuple[Embedding, ExtractionNormalization]:
    report = verify_simultaneous(rec.collection, emb)
    if report:
        raise SimultaneityViolation(
            f"Embedding is not a simultaneous embedding ({len(report)} violations)."
        )
    normalized, flags = normalize_embedding(rec, emb)
    R = restrict(normalized, rec.source.vertices)
    if not realizes(rec.source, R):
        raise SoundnessViolation("Extracted embedding does not realize the walk.")
    return R, flags


@dataclass(frozen=True)
class ChainAudit:
    index: int
    expected: Orientation
    outer: Orientation  # orient(a_i, b_i, c_i)
    hinge: Orientation  # orient(u_i, u_{i+1}, d_i)
    containment: Region  # u_{i+2} against T = (u_i, u_{i+1}, d_i)

    @property
    def holds(self) -> bool:
        return (
            self.outer is Orientation.L
            and self.hinge is self.expected
            and self.containment is Region.INTERIOR
        )


def backward_chain(rec: SgeInstanceRecord, emb: Mapping[str, Point]) -> list[ChainAudit]:
    normalized, _ = normalize_embedding(rec, emb)
    s = rec.source.sequence
    out = []
    for k, (g, turn) in enumerate(zip(rec.gadgets, rec.source.turns)):
        p0, p1, p2 = normalized[s[k]], normalized[s[k + 1]], normalized[s[k + 2]]
        d = normalized[g.d]
        out.append(
            ChainAudit(
                index=g.index,
                expected=turn,
                outer=orient(normalized[g.a], normalized[g.b], normalized[g.c]),
                hinge=orient(p0, p1, d),
                containment=point_in_triangle(p2, p0, p1, d),
            )
        )
    return out


def chain_to_frame(audits: list[ChainAudit]) -> pd.DataFrame:
    rows = [
        {
            "gadget": a.index,
            "expected": a.expected.letter,
            "abc": a.outer.letter,
            "hinge": a.hinge.letter,
            "containment": a.containment.value,
            "holds": a.holds,
        }
        for a in audits
    ]
    return pd.DataFrame(rows)
