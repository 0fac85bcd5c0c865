# src/geometry_core.py

"""
Exact plane geometry over rationals.

Every verdict in the package (realizations, crossing-free drawings,
hook identities) is computed here with `fractions.Fraction` or plain
Python integers. Floating point never decides anything.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .config import PERTURB_EPSILON, PERTURB_MAX_HALVINGS
from .errors import (
    CollinearTripleError,
    DegenerateTriangleError,
    PerturbationFailure,
    ZeroLengthSegmentError,
)

logger = logging.getLogger(__name__)

Rational = Fraction


# ---------------------------------------------------------
# Core value types
# ---------------------------------------------------------

class Orientation(str, Enum):
    """Order type of an ordered triple: left turn, collinear, right turn."""

    L = "l"
    C = "c"
    R = "r"

    def __neg__(self) -> "Orientation":
        if self is Orientation.L:
            return Orientation.R
        if self is Orientation.R:
            return Orientation.L
        return Orientation.C

    def negate(self) -> "Orientation":
        return -self

    @property
    def letter(self) -> str:
        """Uppercase file representation (L / C / R)."""
        return self.value.upper()

    @classmethod
    def from_sign(cls, sign: int) -> "Orientation":
        if sign > 0:
            return cls.L
        if sign < 0:
            return cls.R
        return cls.C

    @classmethod
    def parse(cls, text: str) -> "Orientation":
        key = str(text).strip().lower()
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"Unknown orientation {text!r}; expected one of L, C, R.")


class Point(NamedTuple):
    """A plane point. Coordinates are Fractions (ints are accepted and stay exact)."""

    x: Fraction
    y: Fraction

    def __add__(self, other: "Point") -> "Point":  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, factor) -> "Point":
        return Point(self.x * factor, self.y * factor)


Embedding = dict[str, Point]


def to_rational(value) -> Fraction:
    """Convert ints, Fractions, "num/den" strings and decimal strings exactly.

    Floats are converted through their repr so that 0.1 becomes 1/10,
    not the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("Booleans are not coordinates.")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"Coordinate must be finite, got {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Cannot read {value!r} as a rational number.")


def point(x, y) -> Point:
    return Point(to_rational(x), to_rational(y))


class Region(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


class CrossKind(str, Enum):
    DISJOINT = "disjoint"
    SHARED_ENDPOINT = "shared-endpoint-only"
    OVERLAP = "improper-overlap"
    PROPER = "proper-crossing"
    TOUCH = "endpoint-in-interior"

    @property
    def is_violation(self) -> bool:
        return self in (CrossKind.OVERLAP, CrossKind.PROPER, CrossKind.TOUCH)


# ---------------------------------------------------------
# Predicates
# ---------------------------------------------------------

def cross(u: Point, v: Point, w: Point):
    """Doubled signed area of (u, v, w): (v - u) x (w - u)."""
    return (v.x - u.x) * (w.y - u.y) - (v.y - u.y) * (w.x - u.x)


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def orient(u: Point, v: Point, w: Point) -> Orientation:
    return Orientation.from_sign(_sign(cross(u, v, w)))


def on_closed_segment(p: Point, a: Point, b: Point) -> bool:
    if cross(a, b, p) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def in_open_segment(p: Point, a: Point, b: Point) -> bool:
    """p lies in the relative interior of segment ab."""
    return p != a and p != b and on_closed_segment(p, a, b)


def point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> Region:
    o_ab = orient(a, b, p)
    o_bc = orient(b, c, p)
    o_ca = orient(c, a, p)
    if orient(a, b, c) is Orientation.C:
        raise DegenerateTriangleError(f"Triangle {a}, {b}, {c} is degenerate (collinear corners).")
    if o_ab == o_bc == o_ca and o_ab is not Orientation.C:
        return Region.INTERIOR
    if any(on_closed_segment(p, s, t) for s, t in ((a, b), (b, c), (c, a))):
        return Region.BOUNDARY
    return Region.EXTERIOR


def segments_cross(p1: Point, q1: Point, p2: Point, q2: Point) -> CrossKind:
    """Classify the intersection of the closed segments p1q1 and p2q2."""
    if p1 == q1 or p2 == q2:
        raise ZeroLengthSegmentError(f"Zero-length segment among {p1}-{q1}, {p2}-{q2}.")

    d1 = _sign(cross(p1, q1, p2))
    d2 = _sign(cross(p1, q1, q2))
    d3 = _sign(cross(p2, q2, p1))
    d4 = _sign(cross(p2, q2, q1))

    if d1 == d2 == 0:
        return _collinear_overlap(p1, q1, p2, q2)

    if d1 * d2 < 0 and d3 * d4 < 0:
        return CrossKind.PROPER

    touches = []
    if d1 == 0 and on_closed_segment(p2, p1, q1):
        touches.append(p2)
    if d2 == 0 and on_closed_segment(q2, p1, q1):
        touches.append(q2)
    if d3 == 0 and on_closed_segment(p1, p2, q2):
        touches.append(p1)
    if d4 == 0 and on_closed_segment(q1, p2, q2):
        touches.append(q1)
    if not touches:
        return CrossKind.DISJOINT

    # Non-collinear segments meet in at most one point.
    hit = touches[0]
    if hit in (p1, q1) and hit in (p2, q2):
        return CrossKind.SHARED_ENDPOINT
    return CrossKind.TOUCH


def _collinear_overlap(p1: Point, q1: Point, p2: Point, q2: Point) -> CrossKind:
    # project on the axis along which the first segment varies
    if p1.x != q1.x:
        key = lambda pt: pt.x  # noqa: E731
    else:
        key = lambda pt: pt.y  # noqa: E731
    lo1, hi1 = sorted((key(p1), key(q1)))
    lo2, hi2 = sorted((key(p2), key(q2)))
    lo, hi = max(lo1, lo2), min(hi1, hi2)
    if lo > hi:
        return CrossKind.DISJOINT
    if lo < hi:
        return CrossKind.OVERLAP
    return CrossKind.SHARED_ENDPOINT


# ---------------------------------------------------------
# Affine maps
# ---------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """p -> A p + t with A = [[a, b], [c, d]] and t = (e, f)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction = Fraction(0)
    f: Fraction = Fraction(0)

    def __post_init__(self):
        if self.det == 0:
            raise CollinearTripleError("Affine map must be invertible (det(A) = 0).")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def preserves_orientation(self) -> bool:
        return self.det > 0

    def __call__(self, p: Point) -> Point:
        return Point(self.a * p.x + self.b * p.y + self.e, self.c * p.x + self.d * p.y + self.f)

    def apply(self, emb: Mapping[str, Point]) -> Embedding:
        return {name: self(p) for name, p in emb.items()}

    def inverse(self) -> "AffineMap":
        det = self.det
        a, b, c, d = self.d / det, -self.b / det, -self.c / det, self.a / det
        return AffineMap(a, b, c, d, -(a * self.e + b * self.f), -(c * self.e + d * self.f))

    def then(self, other: "AffineMap") -> "AffineMap":
        """Composition: first self, then other."""
        return AffineMap(
            other.a * self.a + other.b * self.c,
            other.a * self.b + other.b * self.d,
            other.c * self.a + other.d * self.c,
            other.c * self.b + other.d * self.d,
            other.a * self.e + other.b * self.f + other.e,
            other.c * self.e + other.d * self.f + other.f,
        )

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    @classmethod
    def scaling(cls, factor, center: Point | None = None) -> "AffineMap":
        factor = Fraction(factor)
        cx, cy = (center.x, center.y) if center is not None else (0, 0)
        return cls(factor, Fraction(0), Fraction(0), factor, cx - factor * cx, cy - factor * cy)

    @classmethod
    def translation(cls, dx, dy) -> "AffineMap":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1), Fraction(dx), Fraction(dy))

    @classmethod
    def mirror_x(cls) -> "AffineMap":
        """Reflection along the y-axis: (x, y) -> (-x, y)."""
        return cls(Fraction(-1), Fraction(0), Fraction(0), Fraction(1))

    @classmethod
    def rational_rotation(cls, q: Fraction) -> "AffineMap":
        """Rotation with cos = (1-q^2)/(1+q^2), sin = 2q/(1+q^2); exact for rational q."""
        q = Fraction(q)
        den = 1 + q * q
        cos, sin = (1 - q * q) / den, 2 * q / den
        return cls(cos, -sin, sin, cos)


def affine_map_three(src: Sequence[Point], dst: Sequence[Point]) -> AffineMap:
    """The unique affine map sending src[k] to dst[k] for k = 0, 1, 2."""
    s0, s1, s2 = src
    d0, d1, d2 = dst
    if cross(s0, s1, s2) == 0:
        raise CollinearTripleError(f"Source triple {tuple(src)} is collinear.")
    if cross(d0, d1, d2) == 0:
        raise CollinearTripleError(f"Target triple {tuple(dst)} is collinear.")

    # M = columns (s1 - s0, s2 - s0), N = columns (d1 - d0, d2 - d0); A = N M^-1
    m11, m21 = s1.x - s0.x, s1.y - s0.y
    m12, m22 = s2.x - s0.x, s2.y - s0.y
    det_m = m11 * m22 - m12 * m21
    i11, i12, i21, i22 = m22 / det_m, -m12 / det_m, -m21 / det_m, m11 / det_m

    n11, n21 = d1.x - d0.x, d1.y - d0.y
    n12, n22 = d2.x - d0.x, d2.y - d0.y

    a = n11 * i11 + n12 * i21
    b = n11 * i12 + n12 * i22
    c = n21 * i11 + n22 * i21
    d = n21 * i12 + n22 * i22
    e = d0.x - (a * s0.x + b * s0.y)
    f = d0.y - (c * s0.x + d * s0.y)
    return AffineMap(Fraction(a), Fraction(b), Fraction(c), Fraction(d), Fraction(e), Fraction(f))


# ---------------------------------------------------------
# Integer scaling and general position
# ---------------------------------------------------------

def integer_coordinates(points: Iterable[Point]) -> list[tuple[int, int]]:
    """Scale by the common denominator; orientation of every triple is unchanged."""
    pts = [(Fraction(p.x), Fraction(p.y)) for p in points]
    scale = 1
    for x, y in pts:
        scale = math.lcm(scale, x.denominator, y.denominator)
    return [(int(x * scale), int(y * scale)) for x, y in pts]


def _triple_signs(coords: Sequence[tuple[int, int]]) -> Iterable[tuple[tuple[int, int, int], int]]:
    for i, j, k in combinations(range(len(coords)), 3):
        ax, ay = coords[i]
        bx, by = coords[j]
        cx, cy = coords[k]
        value = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        yield (i, j, k), (value > 0) - (value < 0)


def is_general_position(emb: Mapping[str, Point]) -> bool:
    """No two points coincide and no three are collinear."""
    coords = integer_coordinates(emb.values())
    if len(set(coords)) != len(coords):
        return False
    return all(sign != 0 for _, sign in _triple_signs(coords))


def perturb_generic(
    emb: Mapping[str, Point],
    must_hold: Callable[[Embedding], bool],
    eps0: Fraction = PERTURB_EPSILON,
    *,
    general_position: bool = True,
    max_halvings: int = PERTURB_MAX_HALVINGS,
) -> Embedding:
    """
    Deterministic small perturbation into general position.

    Point number j moves by eps * (1, j+1) / (j+1)^2, i.e. along direction
    (1, j+1) by at most eps in l-infinity. The displaced offsets lie on a
    parabola, so the offsets of any three points are never collinear and
    every degenerate triple becomes strict for all but finitely many eps.
    eps starts at eps0 and halves until the result keeps every strict
    orientation of the input, is in general position (if requested) and
    satisfies `must_hold`.
    """
    names = list(emb)
    original = [emb[name] for name in names]

    if must_hold(dict(emb)) and (not general_position or is_general_position(emb)):
        logger.debug("perturb_generic: input already generic, returned unchanged")
        return dict(emb)

    reference = {idx: sign for idx, sign in _triple_signs(integer_coordinates(original)) if sign != 0}

    eps0 = Fraction(eps0)
    for k in range(max_halvings + 1):
        eps = eps0 / (2 ** k)
        moved = [
            Point(p.x + eps / ((j + 1) ** 2), p.y + eps / (j + 1))
            for j, p in enumerate(original)
        ]
        if not _keeps_signs(moved, reference, general_position):
            continue
        candidate = dict(zip(names, moved))
        if must_hold(candidate):
            logger.debug("perturb_generic: succeeded after %d halvings", k)
            return candidate

    raise PerturbationFailure(
        f"No valid perturbation found within {max_halvings} halvings of eps0={eps0}."
    )


def _keeps_signs(moved: Sequence[Point], reference: Mapping, general_position: bool) -> bool:
    coords = integer_coordinates(moved)
    if len(set(coords)) != len(coords):
        return False
    for idx, sign in _triple_signs(coords):
        if sign == 0:
            if general_position:
                return False
            continue
        expected = reference.get(idx)
        if expected is not None and expected != sign:
            return False
    return True


def linf_distance(a: Mapping[str, Point], b: Mapping[str, Point]) -> Fraction:
    return max(
        (max(abs(a[n].x - b[n].x), abs(a[n].y - b[n].y)) for n in a),
        default=Fraction(0),
    )
