# src/cli.py

"""
ordertype: command-line pipelines over walks, reductions and simultaneous embeddings.

Exit codes: 0 yes/valid, 1 no/invalid, 2 unknown, 3 input or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import pandas as pd

from .config import (
    DEFAULT_COOLING,
    DEFAULT_GRID,
    DEFAULT_ITERATIONS,
    DEFAULT_MARGIN,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TEMPERATURE,
)
from .constraints import Inconsistent, embed_degenerate, verify
from .errors import (
    CollinearConstraintUnsupported,
    ConsecutiveDuplicateError,
    DegenerateTripleError,
    InconsistentConstraintsError,
    InputFormatError,
    LengthMismatchError,
    MissingVertexError,
    NameCollisionError,
    NotDegenerateError,
    RealizationInvalidError,
    ReductionError,
    RepeatedVertexError,
    SimultaneityViolation,
    UnknownDirectionError,
    UnknownVertexError,
)
from .load_data import (
    embedding_to_dict,
    load_any_collection,
    load_constraints,
    load_embedding,
    load_record,
    load_solver_input,
    load_walk,
    save_embedding,
    save_json,
    save_record,
    save_walk,
)
from .render import render_collection, render_points, render_walk, save_drawing
from .search import SearchParams, Verdict, sample_walk, solve
from .sge import sharing_profile, verify_simultaneous
from .sge_reduction import build_sge_instance, embed_sge_instance, extract_walk_realization
from .utils import max_bit_size
from .walk import verify_walk_realization, walk_stats
from .walk_reduction import ReductionRecord, lift_realization, reduce_walk, restrict_realization

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3

INPUT_ERRORS = (
    InputFormatError,
    UnknownVertexError,
    RepeatedVertexError,
    ConsecutiveDuplicateError,
    LengthMismatchError,
    UnknownDirectionError,
    NameCollisionError,
    MissingVertexError,
    DegenerateTripleError,
    OSError,
    json.JSONDecodeError,
)

PRECONDITION_ERRORS = (
    RealizationInvalidError,
    SimultaneityViolation,
    InconsistentConstraintsError,
    NotDegenerateError,
    CollinearConstraintUnsupported,
)


@dataclass
class CommandResult:
    code: int
    summary: str
    artifacts: list[Path] = field(default_factory=list)
    table: pd.DataFrame | None = None
    payload: dict = field(default_factory=dict)


def _emit(result: CommandResult, fmt: str) -> None:
    if fmt == "json":
        out = {
            "exit_code": result.code,
            "summary": result.summary,
            "artifacts": [str(p) for p in result.artifacts],
            **result.payload,
        }
        if result.table is not None:
            out["rows"] = result.table.astype(str).to_dict(orient="records")
        print(json.dumps(out, indent=2))
        return
    if fmt == "svg" and "svg" in result.payload:
        print(result.payload["svg"])
        return
    icon = {EXIT_OK: "✅", EXIT_NO: "❌", EXIT_UNKNOWN: "❔"}.get(result.code, "⚠️")
    print(f"{icon} {result.summary}")
    if result.table is not None and not result.table.empty:
        print(result.table.to_string(index=False))
    for path in result.artifacts:
        print(f"📁 Wrote {path}")


# ---------------------------------------------------------
# Commands
# ---------------------------------------------------------

def cmd_walk_check(args) -> CommandResult:
    w = load_walk(args.walk)
    emb = load_embedding(args.embedding)
    report = verify_walk_realization(w, emb)
    if report.ok:
        return CommandResult(EXIT_OK, f"Embedding realizes the walk ({w.t - 2} turns checked).")
    return CommandResult(EXIT_NO, f"{len(report)} of {w.t - 2} turns are wrong.", table=report.to_frame())


def cmd_reduce(args) -> CommandResult:
    w = load_walk(args.walk)
    if w.t < 3:
        raise LengthMismatchError(f"Walk of length {w.t} has no turns to reduce; need t >= 3.")
    out = Path(args.out) if args.out else None

    if args.mode == "walk":
        rec = reduce_walk(w)
        stats = walk_stats(rec.output)
        expected = 14 * (w.t - 2) + 1
        payload = {"input_length": w.t, "output_length": stats.length, "repeated_edges": stats.repeated}
        summary = (
            f"W' has length {stats.length} (14*{w.t - 2}+1 = {expected}) "
            f"and {stats.repeated} repeated edges."
        )
        table = stats.to_frame()
    else:
        rec = build_sge_instance(w)
        profile = sharing_profile(rec.collection)
        n = len(rec.collection.vertices)
        payload = {
            "vertices": n,
            "graphs": len(rec.collection.graphs),
            "edge_disjoint": profile.edge_disjoint,
            "sunflower": profile.sunflower,
        }
        summary = (
            f"{len(rec.collection.graphs)} graphs on {n} vertices (bound 14t = {14 * w.t}); "
            f"edge_disjoint: {str(profile.edge_disjoint).lower()}"
        )
        table = pd.DataFrame([{"statistic": k, "value": v} for k, v in payload.items()])

    artifacts = [save_record(rec, out)] if out else []
    return CommandResult(EXIT_OK, summary, artifacts, table, payload)


def cmd_lift(args) -> CommandResult:
    rec = load_record(args.record)
    R = load_embedding(args.embedding)
    if isinstance(rec, ReductionRecord):
        emb = lift_realization(rec, R, rescale=args.rescale)
        what = "W'"
    else:
        emb = embed_sge_instance(rec, R)
        what = "the simultaneous embedding"
    bits = max_bit_size(emb)
    artifacts = [save_embedding(emb, Path(args.out))] if args.out else []
    return CommandResult(
        EXIT_OK,
        f"Lifted {len(R)} points to {len(emb)}; verified against {what}; max bit size {bits}.",
        artifacts,
        payload={"points": len(emb), "max_bit_size": bits},
    )


def cmd_extract(args) -> CommandResult:
    rec = load_record(args.record)
    emb = load_embedding(args.embedding)
    payload: dict = {}
    if isinstance(rec, ReductionRecord):
        R = restrict_realization(rec, emb)
    else:
        R, flags = extract_walk_realization(rec, emb)
        payload = {"primed_swapped": flags.primed_swapped, "reflected": flags.reflected}
    artifacts = [save_embedding(R, Path(args.out))] if args.out else []
    flags_text = ", ".join(f"{k}: {str(v).lower()}" for k, v in payload.items())
    summary = f"Extracted a realization of the walk on {len(R)} points" + (f" ({flags_text})." if flags_text else ".")
    return CommandResult(EXIT_OK, summary, artifacts, payload=payload)


def cmd_sge_verify(args) -> CommandResult:
    coll = load_any_collection(args.collection)
    emb = load_embedding(args.embedding)
    report = verify_simultaneous(coll, emb)
    if report.ok:
        return CommandResult(EXIT_OK, f"Simultaneous embedding of {len(coll.graphs)} graphs.")
    return CommandResult(
        EXIT_NO,
        f"{len(report)} violations in {len(report.by_graph())} graphs.",
        table=report.to_frame(),
    )


def cmd_sge_profile(args) -> CommandResult:
    coll = load_any_collection(args.collection)
    profile = sharing_profile(coll)
    payload = {
        "graphs": profile.graph_count,
        "public_edges": len(profile.public),
        "edge_disjoint": profile.edge_disjoint,
        "sunflower": profile.sunflower,
    }
    summary = (
        f"{profile.graph_count} graphs, {len(profile.public)} public edges; "
        f"edge_disjoint: {str(profile.edge_disjoint).lower()}, sunflower: {str(profile.sunflower).lower()}"
    )
    return CommandResult(EXIT_OK, summary, table=profile.to_frame(), payload=payload)


def _search_params(args) -> SearchParams:
    return SearchParams(
        seed=args.seed,
        restarts=args.restarts,
        iterations=args.iters,
        temperature=args.temperature,
        cooling=args.cooling,
        margin=Fraction(args.margin),
        grid=args.grid,
        workers=args.workers,
    )


def cmd_solve(args) -> CommandResult:
    cs, _ = load_solver_input(args.input)
    outcome = solve(cs, _search_params(args))
    payload = outcome.to_dict()
    artifacts = []
    if outcome.embedding is not None:
        payload["embedding"] = embedding_to_dict(outcome.embedding)["points"]
    if args.out:
        artifacts.append(save_json(payload, Path(args.out)))

    if outcome.verdict is Verdict.REALIZED:
        return CommandResult(EXIT_OK, f"Realized with {len(outcome.embedding)} points (exactly verified).", artifacts, payload=payload)
    if outcome.verdict is Verdict.UNREALIZABLE:
        return CommandResult(EXIT_NO, f"Unrealizable: {outcome.certificate.describe()}", artifacts, payload=payload)
    scope = f" (grid {outcome.stats.grid_checked} exhausted)" if outcome.stats.grid_checked else ""
    return CommandResult(EXIT_UNKNOWN, f"Unknown after {outcome.stats.restarts_used} restarts{scope}.", artifacts, payload=payload)


def cmd_embed_degenerate(args) -> CommandResult:
    cs = load_constraints(args.constraints)
    if isinstance(cs, Inconsistent):
        return CommandResult(EXIT_NO, f"Inconsistent: {cs.describe()}")
    emb = embed_degenerate(cs)
    if not verify(cs, emb).ok:
        raise RealizationInvalidError("Degenerate embedder produced a placement that fails verification.")
    artifacts = [save_embedding(emb, Path(args.out))] if args.out else []
    return CommandResult(
        EXIT_OK,
        f"Embedded {len(emb)} points; max bit size {max_bit_size(emb)}.",
        artifacts,
        payload={"points": len(emb), "max_bit_size": max_bit_size(emb)},
    )


def cmd_sample(args) -> CommandResult:
    w, emb = sample_walk(args.vertices, args.length, args.seed, forbid_repeated_edges=args.forbid_repeated_edges)
    artifacts = []
    if args.out:
        folder = Path(args.out)
        artifacts = [save_walk(w, folder / "walk.json"), save_embedding(emb, folder / "embedding.json")]
    return CommandResult(EXIT_OK, f"Sampled {w.notation()}", artifacts, payload={"walk": w.to_dict()})


def cmd_render(args) -> CommandResult:
    emb = load_embedding(args.embedding)
    if args.walk:
        drawing = render_walk(load_walk(args.walk), emb)
    elif args.collection:
        drawing = render_collection(load_any_collection(args.collection), emb)
    else:
        drawing = render_points(emb)
    if args.format == "svg" and not args.out:
        return CommandResult(EXIT_OK, f"Rendered {len(emb)} points.", payload={"svg": drawing.as_svg()})
    out = Path(args.out or "embedding.svg")
    return CommandResult(EXIT_OK, f"Rendered {len(emb)} points.", [save_drawing(drawing, out)])


# ---------------------------------------------------------
# Parser
# ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordertype", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--format", choices=("json", "svg", "text"), default="text", help="svg: render prints the drawing to stdout")
    parser.add_argument("--verbose", action="store_true", help="DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("walk-check", help="check an embedding against a walk's turns")
    p.add_argument("walk")
    p.add_argument("embedding")
    p.set_defaults(func=cmd_walk_check)

    p = sub.add_parser("reduce", help="build the repeat-free walk or the simultaneous-embedding instance")
    p.add_argument("walk")
    p.add_argument("--mode", choices=("walk", "sge"), default="walk")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lift", help="extend a walk realization through a reduction record")
    p.add_argument("record")
    p.add_argument("embedding")
    p.add_argument("--out")
    p.add_argument("--rescale", action="store_true", help="fit the lifted walk into the unit square")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("extract", help="recover a walk realization from a reduced solution")
    p.add_argument("record")
    p.add_argument("embedding")
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("sge-verify", help="check a simultaneous embedding")
    p.add_argument("collection")
    p.add_argument("embedding")
    p.set_defaults(func=cmd_sge_verify)

    p = sub.add_parser("sge-profile", help="edge-sharing statistics of a graph collection")
    p.add_argument("collection")
    p.set_defaults(func=cmd_sge_profile)

    p = sub.add_parser("solve", help="search for a realization of constraints or a walk")
    p.add_argument("input")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--margin", type=str, default=str(DEFAULT_MARGIN))
    p.add_argument("--temperature", type=float, default=DEFAULT_TEMPERATURE)
    p.add_argument("--cooling", type=float, default=DEFAULT_COOLING)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("embed-degenerate", help="place a 2-degenerate constraint set")
    p.add_argument("constraints")
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed_degenerate)

    p = sub.add_parser("sample", help="random walk with a known realization")
    p.add_argument("--vertices", type=int, default=8)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--forbid-repeated-edges", action="store_true")
    p.add_argument("--out", help="folder for walk.json and embedding.json")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("render", help="draw an embedding as SVG")
    p.add_argument("embedding")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--walk")
    group.add_argument("--collection")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    return parser


def run(argv: list[str] | None = None) -> CommandResult:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")
    try:
        result = args.func(args)
    except INPUT_ERRORS as exc:
        result = CommandResult(EXIT_INPUT, str(exc))
    except (*PRECONDITION_ERRORS, ReductionError) as exc:
        result = CommandResult(EXIT_NO, str(exc))
    _emit(result, args.format)
    return result


def main(argv: list[str] | None = None) -> int:
    return run(argv).code


if __name__ == "__main__":
    sys.exit(main())
