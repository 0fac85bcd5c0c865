# src/walk_reduction.py

"""
Triangle-gadget reduction: any directional walk W becomes a walk W' that
never repeats an edge and is realizable exactly when W is.

Each turn (u_i, u_{i+1}, u_{i+2}) -> d of W is replaced by a 15-position
fragment over five fresh dummies. Three hooks pin beta, delta and xi to the
d-side of the line u_i u_{i+1}, and u_{i+2} is then forced into the triangle
beta delta xi, which reproduces the turn without walking the edge u_i u_{i+1}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

import pandas as pd

from .errors import (
    DegenerateTripleError,
    LengthMismatchError,
    NameCollisionError,
    RealizationInvalidError,
    SoundnessViolation,
)
from .geometry_core import (
    AffineMap,
    Embedding,
    Orientation,
    Point,
    Region,
    affine_map_three,
    orient,
    perturb_generic,
    point_in_triangle,
)
from .utils import bounding_box, check_fresh, restrict
from .walk import DirectionalWalk, realizes, verify_walk_realization

logger = logging.getLogger(__name__)

DUMMY_ROLES = ("beta", "delta", "xi", "phi", "psi")


class GadgetNames(NamedTuple):
    index: int
    beta: str
    delta: str
    xi: str
    phi: str
    psi: str

    @classmethod
    def for_index(cls, i: int) -> "GadgetNames":
        return cls(i, *(f"{role}.{i}" for role in DUMMY_ROLES))

    @property
    def dummies(self) -> tuple[str, str, str, str, str]:
        return (self.beta, self.delta, self.xi, self.phi, self.psi)


@dataclass(frozen=True)
class ReductionRecord:
    source: DirectionalWalk
    output: DirectionalWalk
    gadgets: tuple[GadgetNames, ...]
    seams: tuple[int, ...]  # 0-based positions in W' where consecutive fragments meet

    @property
    def dummy_names(self) -> list[str]:
        return [name for g in self.gadgets for name in g.dummies]


# ---------------------------------------------------------
# Construction
# ---------------------------------------------------------

def triangle_gadget(g: GadgetNames, u0: str, u1: str, u2: str, d: Orientation) -> DirectionalWalk:
    """The 15-position fragment for one turn; 13 inner directions."""
    d = Orientation(d)
    if d is Orientation.C:
        raise ValueError("A gadget turn must be l or r.")
    if u0 == u2:
        raise DegenerateTripleError(f"Gadget {g.index} needs distinct u_i and u_(i+2), got {u0!r} twice.")
    if len({u0, u1, u2}) != 3:
        raise DegenerateTripleError(f"Gadget {g.index} needs three distinct walk vertices.")
    clash = sorted(set(g.dummies) & {u0, u1, u2})
    if clash:
        raise NameCollisionError(f"Gadget {g.index} dummy names collide with walk vertices: {clash}")

    nd = -d
    sequence = (
        u0, g.beta, u1, g.delta, u0, g.xi, u1, g.phi,
        g.beta, g.delta, u2, g.xi, g.beta, g.psi, u1,
    )
    turns = (nd, d, d, nd, nd, d, d, nd, d, nd, d, d, nd)
    return DirectionalWalk(sequence, turns)


def reduce_walk(w: DirectionalWalk) -> ReductionRecord:
    if w.t < 3:
        raise LengthMismatchError(f"Walk of length {w.t} has no turns to reduce; need t >= 3.")
    for i, ((a, _, c), _) in enumerate(w.triples()):
        if a == c:
            raise DegenerateTripleError(f"Positions {i + 1} and {i + 3} are both {a!r}.")

    gadgets = tuple(GadgetNames.for_index(i + 1) for i in range(w.t - 2))
    check_fresh([n for g in gadgets for n in g.dummies], w.vertices)

    sequence: list[str] = []
    turns: list[Orientation] = []
    seams: list[int] = []
    s = w.sequence
    for k, (g, d) in enumerate(zip(gadgets, w.turns)):
        fragment = triangle_gadget(g, s[k], s[k + 1], s[k + 2], d)
        if k == 0:
            sequence.extend(fragment.sequence)
        else:
            # shared vertex u_i takes direction not d_W(i)
            seams.append(len(sequence) - 1)
            turns.append(-d)
            sequence.extend(fragment.sequence[1:])
        turns.extend(fragment.turns)

    out = DirectionalWalk(tuple(sequence), tuple(turns))
    logger.debug("reduce_walk: t=%d -> t'=%d with %d gadgets", w.t, out.t, len(gadgets))
    return ReductionRecord(w, out, gadgets, tuple(seams))


# ---------------------------------------------------------
# Forward direction
# ---------------------------------------------------------

def _frame_targets(d: Orientation) -> tuple[Point, Point, Point]:
    s = 1 if d is Orientation.L else -1
    return (Point(Fraction(4 * s), Fraction(-2)), Point(Fraction(4 * s), Fraction(2)), Point(Fraction(0), Fraction(0)))


def gadget_coordinates(d: Orientation) -> dict[str, Point]:
    """Fixed positions of beta, delta, xi, phi in a gadget's normalized frame."""
    s = 1 if d is Orientation.L else -1
    return {
        "beta": Point(Fraction(s), Fraction(-3)),
        "delta": Point(Fraction(s), Fraction(3)),
        "xi": Point(Fraction(-s), Fraction(0)),
        "phi": Point(Fraction(2 * s), Fraction(3)),
    }


def _psi_height(d: Orientation, next_vertex: Point | None) -> Fraction:
    """y on the line x = 2s strictly inside triangle (u_{i+1}, u_{i+2}, u_{i+3}), clipped to y >= 0."""
    if next_vertex is None:
        return Fraction(1)
    s = 1 if d is Orientation.L else -1
    _, top, origin = _frame_targets(d)
    corners = (top, origin, next_vertex)
    line_x = Fraction(2 * s)
    ys = []
    for k in range(3):
        p, q = corners[k], corners[(k + 1) % 3]
        if p.x == q.x:
            continue
        if min(p.x, q.x) <= line_x <= max(p.x, q.x):
            ys.append(p.y + (line_x - p.x) * (q.y - p.y) / (q.x - p.x))
    lo, hi = max(min(ys), Fraction(0)), max(ys)
    return (lo + hi) / 2


def lift_realization(
    rec: ReductionRecord,
    R: Mapping[str, Point],
    *,
    perturb: bool = True,
    rescale: bool = False,
) -> Embedding:
    """
    Extend a realization of W to a realization of W'.

    Gadget i is laid out in the frame where (u_i, u_{i+1}, u_{i+2}) sit at
    (4,-2), (4,2), (0,0) (x mirrored for right turns); every map is
    orientation preserving since it sends a d-turn onto a d-turn. The whole
    picture is reported in the frame of the last gadget, so the last
    gadget's dummies keep their literal coordinates until `perturb` moves
    them.
    """
    w = rec.source
    report = verify_walk_realization(w, R)
    if report:
        raise RealizationInvalidError(
            f"Embedding does not realize the input walk ({len(report)} wrong turns)."
        )

    s = w.sequence
    frames: list[AffineMap] = []
    local: list[dict[str, Point]] = []
    for k, (g, d) in enumerate(zip(rec.gadgets, w.turns)):
        to_frame = affine_map_three((R[s[k]], R[s[k + 1]], R[s[k + 2]]), _frame_targets(d))
        coords = gadget_coordinates(d)
        nxt = to_frame(R[s[k + 3]]) if k + 3 < w.t else None
        coords["psi"] = Point(Fraction(2 if d is Orientation.L else -2), _psi_height(d, nxt))
        frames.append(to_frame)
        local.append({getattr(g, role): coords[role] for role in DUMMY_ROLES})

    final = frames[-1]
    emb: Embedding = {v: final(R[v]) for v in w.vertices}
    for to_frame, placed in zip(frames, local):
        back = to_frame.inverse().then(final)
        for name, p in placed.items():
            emb[name] = back(p)

    if perturb:
        emb = perturb_generic(emb, lambda cand: realizes(rec.output, cand))

    if not realizes(rec.output, emb):
        raise SoundnessViolation("Lifted embedding does not realize the reduced walk.")
    if rescale:
        emb = rescale_unit_square(emb)
    logger.info("lift_realization: placed %d points for %d gadgets", len(emb), len(rec.gadgets))
    return emb


def rescale_unit_square(emb: Mapping[str, Point]) -> Embedding:
    """Translate and scale uniformly (positive factor) into [0, 1]^2."""
    if not emb:
        return {}
    min_x, min_y, max_x, max_y = bounding_box(emb)
    span = max(max_x - min_x, max_y - min_y)
    factor = 1 / span if span else Fraction(1)
    shift = AffineMap.translation(-min_x, -min_y).then(AffineMap.scaling(factor))
    return shift.apply(emb)


# ---------------------------------------------------------
# Backward direction
# ---------------------------------------------------------

def restrict_realization(rec: ReductionRecord, R_prime: Mapping[str, Point]) -> Embedding:
    report = verify_walk_realization(rec.output, R_prime)
    if report:
        raise RealizationInvalidError(
            f"Embedding does not realize the reduced walk ({len(report)} wrong turns)."
        )
    R = restrict(R_prime, rec.source.vertices)
    if not realizes(rec.source, R):
        raise SoundnessViolation("Restriction of a W' realization fails to realize W.")
    return R


@dataclass(frozen=True)
class GadgetAudit:
    index: int
    expected: Orientation
    hooks: tuple[Orientation, Orientation, Orientation]  # beta, delta, xi against u_i u_{i+1}
    containment: Region  # u_{i+2} against triangle beta delta xi

    @property
    def holds(self) -> bool:
        return all(h is self.expected for h in self.hooks) and self.containment is Region.INTERIOR


def gadget_identities(rec: ReductionRecord, emb: Mapping[str, Point]) -> list[GadgetAudit]:
    """Hook orientations and the containment of u_{i+2}, per gadget."""
    s = rec.source.sequence
    out = []
    for k, (g, d) in enumerate(zip(rec.gadgets, rec.source.turns)):
        a, b, c = emb[s[k]], emb[s[k + 1]], emb[s[k + 2]]
        hooks = (orient(a, b, emb[g.beta]), orient(a, b, emb[g.delta]), orient(a, b, emb[g.xi]))
        region = point_in_triangle(c, emb[g.beta], emb[g.delta], emb[g.xi])
        out.append(GadgetAudit(g.index, d, hooks, region))
    return out


def audits_to_frame(audits: list[GadgetAudit]) -> pd.DataFrame:
    rows = [
        {
            "gadget": a.index,
            "expected": a.expected.letter,
            "beta": a.hooks[0].letter,
            "delta": a.hooks[1].letter,
            "xi": a.hooks[2].letter,
            "containment": a.containment.value,
            "holds": a.holds,
        }
        for a in audits
    ]
    return pd.DataFrame(rows)
