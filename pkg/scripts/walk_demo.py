# scripts/walk_demo.py

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

print("Using project root:", ROOT)

from src.config import DATA_FINAL, DATA_INPUTS, ensure_directory
from src.geometry_core import point
from src.load_data import save_embedding, save_walk
from src.render import render_collection, render_walk, save_drawing
from src.search import SearchParams, Verdict, solve
from src.sge import GraphCollection, verify_simultaneous
from src.walk import parse_walk, verify_walk_realization, walk_constraints

OUT = ensure_directory(DATA_FINAL / "walk_demo")

# ------------------------------------------------------------
# A directional walk and a hand-digitized realization
# ------------------------------------------------------------
walk = parse_walk("u v^l y^r w^l x^l y^l u^l w^r v")
digitized = {
    "u": point(0, 0),
    "v": point(4, 0),
    "y": point(2, 3),
    "w": point(4, 2),
    "x": point(5, 4),
}

print(f"🧭 Walk: {walk.notation()}")
save_walk(walk, DATA_INPUTS / "walk_demo" / "walk.json")
save_embedding(digitized, DATA_INPUTS / "walk_demo" / "digitized.json")
report = verify_walk_realization(walk, digitized)
print(f"   digitized placement: {len(report)} wrong turns")

outcome = solve(walk_constraints(walk), SearchParams(seed=0, restarts=5, iterations=20_000))
print(f"   solver verdict: {outcome.verdict.value}")
if outcome.verdict is Verdict.REALIZED:
    save_embedding(outcome.embedding, OUT / "walk_solved.json")
    save_drawing(render_walk(walk, outcome.embedding), OUT / "walk_solved.svg")
save_drawing(render_walk(walk, digitized), OUT / "walk_digitized.svg")

# ------------------------------------------------------------
# Two edge-disjoint 5-cycles on one vertex set
# ------------------------------------------------------------
names = [f"v{k}" for k in range(5)]
cycles = GraphCollection.from_edges(
    names,
    [
        ("C1", [("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v0")]),
        ("C2", [("v0", "v2"), ("v2", "v4"), ("v4", "v1"), ("v1", "v3"), ("v3", "v0")]),
    ],
)
simultaneous = {
    "v0": point(0, 0),
    "v1": point(6, 0),
    "v2": point(3, 1),
    "v3": point(1, 6),
    "v4": point(2, 2),
}
convex = {
    "v0": point(0, 0),
    "v1": point(4, 0),
    "v2": point(5, 3),
    "v3": point(2, 5),
    "v4": point(-1, 3),
}

for label, emb in (("simultaneous", simultaneous), ("convex", convex)):
    cr = verify_simultaneous(cycles, emb)
    print(f"🕸️ {label} placement: {len(cr)} violations")
    if not cr.ok:
        print(cr.to_frame().to_string(index=False))
    save_drawing(render_collection(cycles, emb), OUT / f"cycles_{label}.svg")

print(f"\n📁 Pictures in {OUT}")
print("✅ Done")
