# src/utils.py
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NameCollisionError
from .geometry_core import Point


def max_bit_size(emb: Mapping[str, Point]) -> int:
    """Largest numerator/denominator bit length over all coordinates."""
    best = 0
    for p in emb.values():
        for value in (Fraction(p.x), Fraction(p.y)):
            best = max(best, abs(value.numerator).bit_length(), value.denominator.bit_length())
    return best


def bounding_box(emb: Mapping[str, Point]) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(min_x, min_y, max_x, max_y); raises ValueError on an empty embedding."""
    if not emb:
        raise ValueError("bounding_box of an empty embedding")
    xs = [p.x for p in emb.values()]
    ys = [p.y for p in emb.values()]
    return min(xs), min(ys), max(xs), max(ys)


def check_fresh(names: Iterable[str], taken: Iterable[str]) -> None:
    """Generated names must be pairwise distinct and must not reuse input names."""
    names = list(names)
    taken = set(taken)
    clash = sorted(set(names) & taken)
    if clash:
        raise NameCollisionError(f"Generated names collide with input vertices: {clash}")
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise NameCollisionError(f"Generated names are not unique: {dupes}")


def restrict(emb: Mapping[str, Point], names: Iterable[str]) -> dict[str, Point]:
    return {n: emb[n] for n in names}
