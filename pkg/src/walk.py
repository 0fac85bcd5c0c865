# src/walk.py

"""
Directional walks: a vertex sequence u_1..u_t with a prescribed turn at
every inner position.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import pandas as pd

from .constraints import (
    ConstraintSet,
    Inconsistent,
    Report,
    Violation,
    canonicalize,
    require_consistent,
)
from .errors import (
    ConsecutiveDuplicateError,
    DegenerateTripleError,
    InputFormatError,
    LengthMismatchError,
    MissingVertexError,
    UnknownDirectionError,
)
from .geometry_core import Orientation, Point, orient

logger = logging.getLogger(__name__)

TURN_LETTERS = {"L": Orientation.L, "R": Orientation.R}


@dataclass(frozen=True)
class DirectionalWalk:
    sequence: tuple[str, ...]
    turns: tuple[Orientation, ...]

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(str(v) for v in self.sequence))
        object.__setattr__(self, "turns", tuple(Orientation(d) for d in self.turns))

        expected = max(len(self.sequence) - 2, 0)
        if len(self.turns) != expected:
            raise LengthMismatchError(
                f"Walk of length {len(self.sequence)} needs {expected} turns, got {len(self.turns)}."
            )
        for d in self.turns:
            if d is Orientation.C:
                raise UnknownDirectionError("Walk turns must be l or r, not c.")
        for i in range(len(self.sequence) - 1):
            if self.sequence[i] == self.sequence[i + 1]:
                raise ConsecutiveDuplicateError(
                    f"Consecutive positions {i + 1} and {i + 2} both hold {self.sequence[i]!r}."
                )

    @property
    def t(self) -> int:
        return len(self.sequence)

    @property
    def vertices(self) -> tuple[str, ...]:
        """V(W) in order of first appearance."""
        return tuple(dict.fromkeys(self.sequence))

    def edges(self) -> list[frozenset[str]]:
        return [frozenset(pair) for pair in zip(self.sequence, self.sequence[1:])]

    def triples(self) -> list[tuple[tuple[str, str, str], Orientation]]:
        s = self.sequence
        return [((s[i], s[i + 1], s[i + 2]), d) for i, d in enumerate(self.turns)]

    @property
    def turn_string(self) -> str:
        return "".join(d.letter for d in self.turns)

    def notation(self) -> str:
        """Superscript form, e.g. 'u v^l y^r w'."""
        parts = [self.sequence[0]] if self.sequence else []
        for v, d in zip(self.sequence[1:-1], self.turns):
            parts.append(f"{v}^{d.value}")
        if len(self.sequence) > 1:
            parts.append(self.sequence[-1])
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {"walk": list(self.sequence), "turns": self.turn_string}

    def __str__(self) -> str:
        return self.notation()


def _parse_turns(turns) -> list[Orientation]:
    if isinstance(turns, str):
        letters = [ch for ch in turns if not ch.isspace()]
    elif isinstance(turns, (list, tuple)):
        letters = [str(ch) for ch in turns]
    else:
        raise InputFormatError(f"Turns must be a string like 'LR', got {type(turns).__name__}.")
    out = []
    for ch in letters:
        d = TURN_LETTERS.get(ch.strip().upper())
        if d is None:
            raise UnknownDirectionError(f"Unknown direction {ch!r}; expected L or R.")
        out.append(d)
    return out


def walk_from_dict(obj: Mapping) -> DirectionalWalk:
    if not isinstance(obj, Mapping) or "walk" not in obj:
        raise InputFormatError("Walk file must be a JSON object with a 'walk' list.")
    seq = obj["walk"]
    if not isinstance(seq, list) or not all(isinstance(v, str) for v in seq):
        raise InputFormatError("'walk' must be a list of vertex names.")
    return DirectionalWalk(tuple(seq), tuple(_parse_turns(obj.get("turns", ""))))


_SUPERSCRIPT = re.compile(r"^(?P<name>[^\^\s]+)(?:\^(?P<dir>[A-Za-z]+))?$")


def _parse_notation(text: str) -> DirectionalWalk:
    tokens = [tok for tok in re.split(r"[\s,]+", text.strip()) if tok]
    names, turns = [], []
    for pos, tok in enumerate(tokens):
        m = _SUPERSCRIPT.match(tok)
        if m is None:
            raise InputFormatError(f"Cannot read walk token {tok!r}.")
        names.append(m.group("name"))
        inner = 0 < pos < len(tokens) - 1
        if m.group("dir") is None:
            if inner:
                raise LengthMismatchError(f"Inner position {pos + 1} ({tok!r}) has no direction.")
        elif not inner:
            raise LengthMismatchError(f"End position {pos + 1} ({tok!r}) cannot carry a direction.")
        else:
            turns.extend(_parse_turns(m.group("dir")))
    return DirectionalWalk(tuple(names), tuple(turns))


def parse_walk(text: str) -> DirectionalWalk:
    """Read a walk from JSON ({"walk": [...], "turns": "LR..."}) or superscript notation."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"Walk JSON does not parse: {exc}") from exc
        return walk_from_dict(obj)
    return _parse_notation(stripped)


# ---------------------------------------------------------
# Statistics
# ---------------------------------------------------------

@dataclass(frozen=True)
class WalkStats:
    length: int
    vertex_count: int
    edge_count: int
    repeated: int
    max_multiplicity: int

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"statistic": "length", "value": self.length},
                {"statistic": "vertices", "value": self.vertex_count},
                {"statistic": "edges", "value": self.edge_count},
                {"statistic": "repeated_edges", "value": self.repeated},
                {"statistic": "max_multiplicity", "value": self.max_multiplicity},
            ]
        )


def walk_stats(w: DirectionalWalk) -> WalkStats:
    counts = Counter(w.edges())
    return WalkStats(
        length=w.t,
        vertex_count=len(w.vertices),
        edge_count=sum(counts.values()),
        repeated=sum(1 for c in counts.values() if c > 1),
        max_multiplicity=max(counts.values(), default=0),
    )


# ---------------------------------------------------------
# Constraints and verification
# ---------------------------------------------------------

def walk_constraints(w: DirectionalWalk, strict: bool = False) -> ConstraintSet | Inconsistent:
    for i, ((a, _, c), _) in enumerate(w.triples()):
        if a == c:
            raise DegenerateTripleError(
                f"Positions {i + 1} and {i + 3} are both {a!r}; that turn has no l/r meaning."
            )
    result = canonicalize(w.triples(), universe=w.vertices)
    if strict:
        return require_consistent(result)
    return result


def verify_walk_realization(w: DirectionalWalk, emb: Mapping[str, Point]) -> Report:
    """
    One violation per inner position whose turn is wrong.

    The report is empty exactly when constraints.verify(walk_constraints(w), emb)
    is; listing positions keeps every failing turn visible even when two
    positions share an unordered triple.
    """
    missing = [v for v in w.vertices if v not in emb]
    if missing:
        raise MissingVertexError(f"Embedding is missing walk vertices: {missing}")

    violations = []
    for (a, b, c), d in w.triples():
        actual = orient(emb[a], emb[b], emb[c])
        if actual is not d:
            violations.append(Violation((a, b, c), d, actual))
    return Report(tuple(violations))


def realizes(w: DirectionalWalk, emb: Mapping[str, Point]) -> bool:
    return verify_walk_realization(w, emb).ok


def reversed_walk(w: DirectionalWalk) -> DirectionalWalk:
    """Same walk traversed backwards; every turn flips."""
    return DirectionalWalk(tuple(reversed(w.sequence)), tuple(-d for d in reversed(w.turns)))


def walk_of_sequence(sequence: Sequence[str], emb: Mapping[str, Point]) -> DirectionalWalk:
    """Read the turns of `sequence` off the geometry of `emb`."""
    turns = []
    for i in range(len(sequence) - 2):
        d = orient(emb[sequence[i]], emb[sequence[i + 1]], emb[sequence[i + 2]])
        if d is Orientation.C:
            raise DegenerateTripleError(f"Positions {i + 1}..{i + 3} of the sequence are collinear.")
        turns.append(d)
    return DirectionalWalk(tuple(sequence), tuple(turns))
