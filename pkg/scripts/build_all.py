# scripts/build_all.py

import argparse
import sys
import time
from pathlib import Path

# ------------------------------------------------------------
# Ensure root directory is on PYTHONPATH so "src" imports work
# ------------------------------------------------------------
ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

print("Using project root:", ROOT)

import numpy as np
import pandas as pd

from src.config import ACCEPTANCE_SUMMARY_FILE, DATA_FINAL, ensure_directory
from src.constraints import embed_degenerate, has_distinct_slopes, verify
from src.geometry_core import AffineMap
from src.search import sample_degenerate_constraints, sample_walk
from src.sge import sharing_profile, verify_simultaneous
from src.sge_reduction import build_sge_instance, embed_sge_instance, extract_walk_realization
from src.walk import realizes
from src.walk_reduction import audits_to_frame, gadget_identities, lift_realization, reduce_walk, restrict_realization

parser = argparse.ArgumentParser(description="Run the reduction round trips and write a summary CSV.")
parser.add_argument("--walks", type=int, default=200)
parser.add_argument("--sge-walks", type=int, default=100)
parser.add_argument("--degenerate", type=int, default=100)
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

rng = np.random.default_rng(args.seed)
rows = []


def record(check: str, instances: int, failures: int, started: float) -> None:
    rows.append({
        "check": check,
        "instances": instances,
        "failures": failures,
        "seconds": round(time.perf_counter() - started, 2),
    })
    icon = "✅" if failures == 0 else "⚠️"
    print(f"{icon} {check}: {instances - failures}/{instances} passed")


# ------------------------------------------------------------
# Repeat-free walk reduction round trip + gadget identities
# ------------------------------------------------------------
print("🔁 Walk reduction round trips...")
started = time.perf_counter()
failures = 0
gadget_failures = 0
audit_frames = []
for _ in range(args.walks):
    t = int(rng.integers(3, 13))
    n = int(rng.integers(3, 9))
    w, R = sample_walk(n, t, int(rng.integers(2**31)))
    rec = reduce_walk(w)
    out = rec.output
    repeated = len(out.edges()) - len(set(out.edges()))
    lifted = lift_realization(rec, R)
    ok = (
        repeated == 0
        and out.t == 14 * (t - 2) + 1
        and realizes(out, lifted)
        and realizes(w, restrict_realization(rec, lifted))
    )
    failures += not ok
    audits = audits_to_frame(gadget_identities(rec, lifted))
    if not audits["holds"].all():
        gadget_failures += 1
        audit_frames.append(audits.assign(walk=w.notation()))
record("walk_round_trip", args.walks, failures, started)
record("gadget_identities", args.walks, gadget_failures, started)

# ------------------------------------------------------------
# Simultaneous embedding round trip
# ------------------------------------------------------------
print("🕸️ Simultaneous embedding round trips...")
started = time.perf_counter()
failures = 0
for _ in range(args.sge_walks):
    t = int(rng.integers(3, 11))
    n = int(rng.integers(6, 9))  # enough edges for a repeat-free walk of length 10
    w, R = sample_walk(n, t, int(rng.integers(2**31)), forbid_repeated_edges=True)
    rec = build_sge_instance(w)
    coll = rec.collection
    size_ok = len(coll.vertices) == 12 * (t - 2) + 5 + 2 * len(w.vertices) < 14 * t
    emb = embed_sge_instance(rec, R)
    swap = rec.swap_map()
    disguised = AffineMap.mirror_x().apply({swap.get(k, k): p for k, p in emb.items()})
    ok = size_ok and sharing_profile(coll).edge_disjoint and verify_simultaneous(coll, emb).ok
    for candidate in (emb, disguised):
        recovered, _ = extract_walk_realization(rec, candidate)
        ok = ok and realizes(w, recovered)
    failures += not ok
record("sge_round_trip", args.sge_walks, failures, started)

# ------------------------------------------------------------
# 2-degenerate embedder
# ------------------------------------------------------------
print("📐 Degenerate embedder...")
started = time.perf_counter()
failures = 0
for _ in range(args.degenerate):
    cs = sample_degenerate_constraints(int(rng.integers(3, 21)), int(rng.integers(2**31)))
    emb = embed_degenerate(cs)
    failures += not (verify(cs, emb).ok and has_distinct_slopes(emb))
record("degenerate_embedder", args.degenerate, failures, started)

# ------------------------------------------------------------
# Save summary
# ------------------------------------------------------------
summary = pd.DataFrame(rows)
ensure_directory(DATA_FINAL)
out_path = DATA_FINAL / ACCEPTANCE_SUMMARY_FILE
summary.to_csv(out_path, index=False)
if audit_frames:
    audit_path = DATA_FINAL / "failed_gadget_audits.csv"
    pd.concat(audit_frames, ignore_index=True).to_csv(audit_path, index=False)
    print(f"⚠️ Failing gadget audits written to {audit_path}")

print("\nAcceptance summary:")
print(summary.to_string(index=False))
print(f"\n📁 Saved {out_path}")

if summary["failures"].sum() == 0:
    print("\n✅ All checks passed.")
else:
    print("\n⚠️ Some checks failed.")
    sys.exit(1)
