import json

import pytest

from src.constraints import ConstraintSet, Inconsistent, verify
from src.errors import (
    ConsecutiveDuplicateError,
    DegenerateTripleError,
    InconsistentConstraintsError,
    InputFormatError,
    LengthMismatchError,
    MissingVertexError,
    UnknownDirectionError,
)
from src.geometry_core import AffineMap, Orientation, point
from src.walk import (
    DirectionalWalk,
    parse_walk,
    realizes,
    reversed_walk,
    verify_walk_realization,
    walk_constraints,
    walk_from_dict,
    walk_of_sequence,
    walk_stats,
)

L, R = Orientation.L, Orientation.R


def test_notation_round_trip(uvwxy_walk):
    assert uvwxy_walk.t == 9
    assert uvwxy_walk.turn_string == "LRLLLLR"
    assert uvwxy_walk.vertices == ("u", "v", "y", "w", "x")
    assert uvwxy_walk.notation() == "u v^l y^r w^l x^l y^l u^l w^r v"


def test_json_and_notation_agree(uvwxy_walk):
    text = json.dumps({"walk": list(uvwxy_walk.sequence), "turns": "LRLLLLR"})
    assert parse_walk(text) == uvwxy_walk
    assert walk_from_dict(uvwxy_walk.to_dict()) == uvwxy_walk


@pytest.mark.parametrize(
    "text, error",
    [
        ("a b^l", LengthMismatchError),
        ("a b c", LengthMismatchError),
        ("a^l b^r c", LengthMismatchError),
        ("a b^q c", UnknownDirectionError),
        ("a a^l b", ConsecutiveDuplicateError),
        ('{"walk": ["a", "b", "c"], "turns": "LR"}', LengthMismatchError),
        ('{"walk": "abc"}', InputFormatError),
        ("{not json", InputFormatError),
    ],
)
def test_malformed_walks(text, error):
    with pytest.raises(error):
        parse_walk(text)


def test_collinear_turn_is_rejected():
    with pytest.raises(UnknownDirectionError):
        DirectionalWalk(("a", "b", "c"), (Orientation.C,))


def test_short_walks_have_no_turns():
    w = DirectionalWalk(("a", "b"), ())
    assert w.triples() == []
    assert walk_constraints(w) == ConstraintSet(("a", "b"), {})


def test_uvwxy_walk_has_six_distinct_triples(uvwxy_walk):
    cs = walk_constraints(uvwxy_walk)
    assert isinstance(cs, ConstraintSet)
    # (y, w, x) and (w, x, y) are the same unordered triple with agreeing turns
    assert len(uvwxy_walk.triples()) == 7
    assert len(cs) == 6
    assert cs.universe == uvwxy_walk.vertices


def test_walk_constraints_reports_contradiction():
    w = parse_walk("a b^l c^l a^l b")
    # (a, b, c) -> l and (c, a, b) -> l agree, (b, c, a) too: consistent
    assert isinstance(walk_constraints(w), ConstraintSet)
    bad = parse_walk("a b^l c^l d^l b^l a^l c")
    assert isinstance(walk_constraints(bad), Inconsistent)
    with pytest.raises(InconsistentConstraintsError):
        walk_constraints(bad, strict=True)


def test_walk_constraints_rejects_immediate_return():
    with pytest.raises(DegenerateTripleError):
        walk_constraints(parse_walk("a b^l a"))


def test_digitized_embedding_realizes_the_uvwxy_walk(uvwxy_walk, uvwxy_embedding):
    report = verify_walk_realization(uvwxy_walk, uvwxy_embedding)
    assert report.ok
    assert realizes(uvwxy_walk, uvwxy_embedding)
    assert verify(walk_constraints(uvwxy_walk), uvwxy_embedding).ok


def test_reflection_flips_every_turn(uvwxy_walk, uvwxy_embedding):
    mirrored = AffineMap.mirror_x().apply(uvwxy_embedding)
    report = verify_walk_realization(uvwxy_walk, mirrored)
    assert len(report) == 7
    assert all(v.actual is -v.prescribed for v in report.violations)
    assert realizes(reversed_walk(uvwxy_walk), uvwxy_embedding)


def test_missing_vertex(uvwxy_walk, uvwxy_embedding):
    del uvwxy_embedding["x"]
    with pytest.raises(MissingVertexError):
        verify_walk_realization(uvwxy_walk, uvwxy_embedding)


def test_walk_of_sequence_reads_turns(uvwxy_walk, uvwxy_embedding):
    assert walk_of_sequence(uvwxy_walk.sequence, uvwxy_embedding) == uvwxy_walk
    with pytest.raises(DegenerateTripleError):
        walk_of_sequence(["a", "b", "c"], {"a": point(0, 0), "b": point(1, 1), "c": point(2, 2)})


def test_walk_stats(uvwxy_walk):
    stats = walk_stats(uvwxy_walk)
    assert (stats.length, stats.vertex_count, stats.edge_count) == (9, 5, 8)
    assert stats.repeated == 0
    repeated = walk_stats(parse_walk("a b^l c^l a^l b"))
    assert repeated.repeated == 1
    assert repeated.max_multiplicity == 2
    assert set(repeated.to_frame()["statistic"]) >= {"length", "repeated_edges"}
