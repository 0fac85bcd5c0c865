# src/load_data.py

"""JSON file formats: walks, embeddings, constraint sets, graph collections and reduction records."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .config import FORMAT_VERSION, ensure_directory
from .constraints import ConstraintSet, Inconsistent, from_triples
from .errors import InputFormatError, ReductionError
from .geometry_core import Embedding, Point, to_rational
from .sge import GraphCollection
from .sge_reduction import FrameNames, SgeGadgetNames, SgeInstanceRecord
from .walk import DirectionalWalk, parse_walk, walk_constraints, walk_from_dict
from .walk_reduction import GadgetNames, ReductionRecord

WALK_RECORD = "walk_reduction"
SGE_RECORD = "sge_instance"


def _read_json(path: Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputFormatError(f"{path} must hold a JSON object.")
    _check_version(obj)
    return obj


def _check_version(obj: Mapping) -> None:
    version = obj.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputFormatError(f"Unsupported format_version {version!r}; expected {FORMAT_VERSION}.")


def _write_json(obj: dict, path: Path) -> Path:
    path = Path(path)
    ensure_directory(path.parent)
    path.write_text(json.dumps({"format_version": FORMAT_VERSION, **obj}, indent=2), encoding="utf-8")
    return path


def rational_to_str(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------
# Embeddings
# ---------------------------------------------------------

def embedding_to_dict(emb: Mapping[str, Point]) -> dict:
    return {"points": {name: [rational_to_str(p.x), rational_to_str(p.y)] for name, p in emb.items()}}


def embedding_from_dict(obj: Mapping) -> Embedding:
    points = obj.get("points")
    if not isinstance(points, Mapping):
        raise InputFormatError("Embedding file must have a 'points' object.")
    emb: Embedding = {}
    for name, xy in points.items():
        if not isinstance(xy, (list, tuple)) or len(xy) != 2:
            raise InputFormatError(f"Point {name!r} must be a 2-element array, got {xy!r}.")
        try:
            emb[str(name)] = Point(to_rational(xy[0]), to_rational(xy[1]))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputFormatError(f"Point {name!r} has an unreadable coordinate: {exc}") from exc
    return emb


def load_embedding(path: Path) -> Embedding:
    return embedding_from_dict(_read_json(path))


def save_embedding(emb: Mapping[str, Point], path: Path) -> Path:
    return _write_json(embedding_to_dict(emb), path)


# ---------------------------------------------------------
# Walks
# ---------------------------------------------------------

def load_walk(path: Path) -> DirectionalWalk:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return walk_from_dict(_read_json(path))
    # plain superscript notation
    return parse_walk(text)


def save_walk(w: DirectionalWalk, path: Path) -> Path:
    return _write_json(w.to_dict(), path)


# ---------------------------------------------------------
# Constraint sets
# ---------------------------------------------------------

def constraints_to_dict(cs: ConstraintSet) -> dict:
    return {
        "universe": list(cs.universe),
        "constraints": [[a, b, c, v.letter] for (a, b, c), v in cs],
    }


def constraints_from_dict(obj: Mapping) -> ConstraintSet | Inconsistent:
    rows = obj.get("constraints")
    if not isinstance(rows, list):
        raise InputFormatError("Constraint file must have a 'constraints' list.")
    universe = obj.get("universe")
    try:
        return from_triples(rows, universe)
    except ReductionError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputFormatError(str(exc)) from exc


def load_constraints(path: Path) -> ConstraintSet | Inconsistent:
    return constraints_from_dict(_read_json(path))


def save_constraints(cs: ConstraintSet, path: Path) -> Path:
    return _write_json(constraints_to_dict(cs), path)


# ---------------------------------------------------------
# Graph collections
# ---------------------------------------------------------

def collection_to_dict(coll: GraphCollection) -> dict:
    return {
        "vertices": list(coll.vertices),
        "graphs": [
            {"name": name, "edges": sorted(sorted(e) for e in G.edges)}
            for name, G in coll.graphs.items()
        ],
    }


def collection_from_dict(obj: Mapping) -> GraphCollection:
    vertices = obj.get("vertices")
    graphs = obj.get("graphs")
    if not isinstance(vertices, list) or not isinstance(graphs, list):
        raise InputFormatError("Collection file needs 'vertices' and 'graphs' lists.")
    parsed = []
    for entry in graphs:
        if not isinstance(entry, Mapping) or "name" not in entry:
            raise InputFormatError("Each graph needs a 'name' and an 'edges' list.")
        edges = entry.get("edges", [])
        if any(not isinstance(e, list) or len(e) != 2 for e in edges):
            raise InputFormatError(f"Graph {entry['name']!r} has a malformed edge.")
        parsed.append((str(entry["name"]), [tuple(e) for e in edges]))
    return GraphCollection.from_edges([str(v) for v in vertices], parsed)


def load_collection(path: Path) -> GraphCollection:
    return collection_from_dict(_read_json(path))


def save_collection(coll: GraphCollection, path: Path) -> Path:
    return _write_json(collection_to_dict(coll), path)


# ---------------------------------------------------------
# Reduction records
# ---------------------------------------------------------

def record_to_dict(rec: ReductionRecord | SgeInstanceRecord) -> dict:
    if isinstance(rec, ReductionRecord):
        return {
            "kind": WALK_RECORD,
            "input": rec.source.to_dict(),
            "output": rec.output.to_dict(),
            "gadgets": [g._asdict() for g in rec.gadgets],
            "seams": list(rec.seams),
        }
    return {
        "kind": SGE_RECORD,
        **collection_to_dict(rec.collection),
        "meta": {
            "walk": rec.source.to_dict(),
            "gadgets": [g._asdict() for g in rec.gadgets],
            "primed_gadgets": [g._asdict() for g in rec.primed_gadgets],
            "walk_primes": dict(rec.walk_primes),
            "frame": rec.frame._asdict(),
        },
    }


def record_from_dict(obj: Mapping) -> ReductionRecord | SgeInstanceRecord:
    kind = obj.get("kind")
    try:
        if kind == WALK_RECORD:
            return ReductionRecord(
                source=walk_from_dict(obj["input"]),
                output=walk_from_dict(obj["output"]),
                gadgets=tuple(GadgetNames(**g) for g in obj["gadgets"]),
                seams=tuple(int(s) for s in obj.get("seams", [])),
            )
        if kind == SGE_RECORD:
            meta = obj["meta"]
            return SgeInstanceRecord(
                source=walk_from_dict(meta["walk"]),
                collection=collection_from_dict(obj),
                gadgets=tuple(SgeGadgetNames(**g) for g in meta["gadgets"]),
                primed_gadgets=tuple(SgeGadgetNames(**g) for g in meta["primed_gadgets"]),
                walk_primes=dict(meta["walk_primes"]),
                frame=FrameNames(**meta["frame"]),
            )
    except (KeyError, TypeError) as exc:
        raise InputFormatError(f"Record of kind {kind!r} is missing fields: {exc}") from exc
    raise InputFormatError(f"Unknown record kind {kind!r}; expected {WALK_RECORD!r} or {SGE_RECORD!r}.")


def load_record(path: Path) -> ReductionRecord | SgeInstanceRecord:
    return record_from_dict(_read_json(path))


def save_record(rec: ReductionRecord | SgeInstanceRecord, path: Path) -> Path:
    return _write_json(record_to_dict(rec), path)


def save_json(obj: dict, path: Path) -> Path:
    """Any other artifact (search outcomes, summaries) with the format_version stamp."""
    return _write_json(obj, path)


# ---------------------------------------------------------
# Inputs that may come in more than one shape
# ---------------------------------------------------------

def load_any_collection(path: Path) -> GraphCollection:
    """A bare collection file or the collection inside an sge_instance record."""
    obj = _read_json(path)
    if obj.get("kind") == SGE_RECORD:
        return record_from_dict(obj).collection
    return collection_from_dict(obj)


def load_solver_input(path: Path) -> tuple[ConstraintSet | Inconsistent, DirectionalWalk | None]:
    """A constraint file, or a walk (JSON or notation) whose turns become the constraints."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        obj = _read_json(path)
        if "constraints" in obj:
            return constraints_from_dict(obj), None
        w = walk_from_dict(obj)
    else:
        w = parse_walk(text)
    return walk_constraints(w), w
