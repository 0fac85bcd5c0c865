import json
from fractions import Fraction

import pytest

from src.constraints import Inconsistent
from src.errors import InputFormatError, RepeatedVertexError, UnknownVertexError
from src.geometry_core import point
from src.load_data import (
    load_any_collection,
    load_collection,
    load_constraints,
    load_embedding,
    load_record,
    load_solver_input,
    load_walk,
    save_collection,
    save_embedding,
    save_record,
    save_walk,
)
from src.sge_reduction import SgeInstanceRecord, build_sge_instance
from src.walk_reduction import ReductionRecord, reduce_walk


def _write(path, obj):
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj, encoding="utf-8")
    return path


def test_embedding_files_keep_exact_rationals(tmp_path):
    emb = {"a": point("1/3", -2), "b": point(0, "7/11")}
    path = save_embedding(emb, tmp_path / "out" / "emb.json")
    raw = json.loads(path.read_text())
    assert raw["format_version"] == 1
    assert raw["points"]["a"] == ["1/3", "-2/1"]
    assert load_embedding(path) == emb


def test_embedding_accepts_decimals_and_integers(tmp_path):
    path = _write(tmp_path / "emb.json", {"points": {"a": [0.5, 2], "b": ["0.25", "3/4"]}})
    emb = load_embedding(path)
    assert emb["a"] == point(Fraction(1, 2), 2)
    assert emb["b"] == point(Fraction(1, 4), Fraction(3, 4))


@pytest.mark.parametrize(
    "content",
    [
        {"points": {"a": [1]}},
        {"points": {"a": ["x", 1]}},
        {"points": [1, 2]},
        {"format_version": 2, "points": {}},
        "[1, 2]",
        "{broken",
    ],
)
def test_bad_embedding_files(tmp_path, content):
    path = _write(tmp_path / "emb.json", content)
    with pytest.raises(InputFormatError):
        load_embedding(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_embedding(tmp_path / "nope.json")


def test_walk_files(tmp_path, uvwxy_walk):
    path = save_walk(uvwxy_walk, tmp_path / "walk.json")
    assert load_walk(path) == uvwxy_walk
    text = _write(tmp_path / "walk.txt", uvwxy_walk.notation())
    assert load_walk(text) == uvwxy_walk


def test_constraint_files(tmp_path):
    path = _write(
        tmp_path / "cs.json",
        {"format_version": 1, "universe": ["a", "b", "c"], "constraints": [["a", "b", "c", "L"], ["b", "a", "c", "L"]]},
    )
    assert isinstance(load_constraints(path), Inconsistent)

    path = _write(tmp_path / "cs2.json", {"constraints": [["a", "b", "q", "L"]], "universe": ["a", "b", "c"]})
    with pytest.raises(UnknownVertexError):
        load_constraints(path)

    path = _write(tmp_path / "cs3.json", {"constraints": [["a", "b", "c"]]})
    with pytest.raises(InputFormatError):
        load_constraints(path)

    path = _write(tmp_path / "cs4.json", {"constraints": [["a", "a", "b", "L"]]})
    with pytest.raises(RepeatedVertexError):
        load_constraints(path)

    path = _write(tmp_path / "cs5.json", {"constraints": [["a", "b", "c", "Q"]]})
    with pytest.raises(InputFormatError):
        load_constraints(path)


def test_collection_files(tmp_path, five_cycles):
    path = save_collection(five_cycles, tmp_path / "coll.json")
    loaded = load_collection(path)
    assert loaded.vertices == five_cycles.vertices
    assert loaded.edge_sets() == five_cycles.edge_sets()
    assert load_any_collection(path).names == ["C1", "C2"]

    bad = _write(tmp_path / "bad.json", {"vertices": ["a"], "graphs": [{"name": "G", "edges": [["a"]]}]})
    with pytest.raises(InputFormatError):
        load_collection(bad)


def test_walk_record_round_trip(tmp_path, uvwxy_walk):
    rec = reduce_walk(uvwxy_walk)
    path = save_record(rec, tmp_path / "rec.json")
    assert json.loads(path.read_text())["kind"] == "walk_reduction"
    loaded = load_record(path)
    assert isinstance(loaded, ReductionRecord)
    assert loaded == rec


def test_sge_record_round_trip(tmp_path, uvwxy_walk):
    rec = build_sge_instance(uvwxy_walk)
    path = save_record(rec, tmp_path / "sge.json")
    loaded = load_record(path)
    assert isinstance(loaded, SgeInstanceRecord)
    assert loaded.source == rec.source
    assert loaded.gadgets == rec.gadgets and loaded.primed_gadgets == rec.primed_gadgets
    assert loaded.swap_map() == rec.swap_map()
    assert loaded.collection.edge_sets() == rec.collection.edge_sets()
    assert load_any_collection(path).vertices == rec.collection.vertices


def test_unknown_record_kind(tmp_path):
    path = _write(tmp_path / "rec.json", {"kind": "mystery"})
    with pytest.raises(InputFormatError):
        load_record(path)
    path = _write(tmp_path / "rec2.json", {"kind": "walk_reduction"})
    with pytest.raises(InputFormatError):
        load_record(path)


def test_solver_input_accepts_walks_and_constraints(tmp_path, uvwxy_walk):
    cs, w = load_solver_input(save_walk(uvwxy_walk, tmp_path / "walk.json"))
    assert w == uvwxy_walk and len(cs) == 6
    cs, w = load_solver_input(_write(tmp_path / "cs.json", {"constraints": [["a", "b", "c", "R"]]}))
    assert w is None and len(cs) == 1
