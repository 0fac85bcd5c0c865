# src/search.py

"""
Realizability search for partial order types.

Nothing here decides realizability in general. Positive answers always
carry an embedding that passed exact verification; the only negative
certificate is a closure contradiction. Grid exhaustion is reported as
a statement about that grid only.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .config import (
    DEFAULT_COOLING,
    DEFAULT_GRID,
    DEFAULT_ITERATIONS,
    DEFAULT_MARGIN,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TEMPERATURE,
    GRID_UNIVERSE_LIMIT,
    MAX_SNAP_BITS,
    SAMPLE_GRID,
    SAMPLE_REJECTION_BUDGET,
)
from .constraints import ConstraintSet, Inconsistent, canonicalize, verify
from .errors import RejectionBudgetExhausted, SoundnessViolation, UniverseTooLargeError
from .geometry_core import Embedding, Orientation, Point, is_general_position
from .walk import DirectionalWalk, walk_of_sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchParams:
    seed: int = DEFAULT_SEED
    restarts: int = DEFAULT_RESTARTS
    iterations: int = DEFAULT_ITERATIONS
    temperature: float = DEFAULT_TEMPERATURE
    cooling: float = DEFAULT_COOLING
    margin: Fraction = DEFAULT_MARGIN
    grid: int = DEFAULT_GRID
    workers: int = 1

    def __post_init__(self):
        for name in ("restarts", "iterations", "grid", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.temperature <= 0 or not 0 < self.cooling <= 1:
            raise ValueError("temperature must be > 0 and cooling in (0, 1].")
        if Fraction(self.margin) <= 0:
            raise ValueError(f"margin must be positive, got {self.margin}")


class Verdict(str, Enum):
    REALIZED = "realized"
    UNREALIZABLE = "unrealizable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchStats:
    restarts_used: int = 0
    iterations: int = 0
    trace_length: int = 0
    grid_checked: int | None = None  # grid size the oracle exhausted, if any


@dataclass(frozen=True)
class SearchOutcome:
    verdict: Verdict
    embedding: Embedding | None = None
    certificate: Inconsistent | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "stats": {
                "restarts_used": self.stats.restarts_used,
                "iterations": self.stats.iterations,
                "trace_length": self.stats.trace_length,
                "grid_checked": self.stats.grid_checked,
            },
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.describe()
        return out


# ---------------------------------------------------------
# Grid oracle
# ---------------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    realizable: bool
    embedding: Embedding | None = None
    grid: int = 0

    @property
    def label(self) -> str:
        return "realizable" if self.realizable else "grid-unrealizable"


def _active_constraints(cs: ConstraintSet, order: Sequence[str]) -> list[list[tuple[int, int, int]]]:
    """Per depth: (p, q, sign) with p, q placed earlier; the constraint reads sign(cross(p, q, new))."""
    depth = {v: k for k, v in enumerate(order)}
    active: list[list[tuple[int, int, int]]] = [[] for _ in order]
    for (a, b, c), value in cs:
        last = max((a, b, c), key=depth.__getitem__)
        if last == a:
            p, q = b, c
        elif last == b:
            p, q = c, a
        else:
            p, q = a, b
        sign = {Orientation.L: 1, Orientation.R: -1, Orientation.C: 0}[value]
        active[depth[last]].append((depth[p], depth[q], sign))
    return active


def grid_oracle(
    cs: ConstraintSet | Inconsistent,
    g: int = DEFAULT_GRID,
    *,
    limit: int | None = GRID_UNIVERSE_LIMIT,
) -> OracleResult:
    """First injective placement on the g x g grid, in lexicographic order, that verifies exactly."""
    if g < 2:
        raise ValueError(f"grid size must be at least 2, got {g}")
    if isinstance(cs, Inconsistent):
        return OracleResult(False, None, g)
    order = list(cs.universe)
    n = len(order)
    if limit is not None and n > limit:
        raise UniverseTooLargeError(
            f"Universe has {n} vertices; grid_oracle is limited to {limit} (pass limit=None to override)."
        )
    if n == 0:
        return OracleResult(True, {}, g)

    xs, ys = np.divmod(np.arange(g * g, dtype=np.int64), g)
    active = _active_constraints(cs, order)
    chosen = [0] * n
    used = np.zeros(g * g, dtype=bool)

    def candidates(k: int) -> np.ndarray:
        ok = ~used
        for p, q, sign in active[k]:
            px, py = xs[chosen[p]], ys[chosen[p]]
            qx, qy = xs[chosen[q]], ys[chosen[q]]
            area = (qx - px) * (ys - py) - (qy - py) * (xs - px)
            ok &= np.sign(area) == sign
        return np.flatnonzero(ok)

    def place(k: int) -> bool:
        if k == n:
            return True
        for idx in candidates(k):
            chosen[k] = int(idx)
            used[idx] = True
            if place(k + 1):
                return True
            used[idx] = False
        return False

    if not place(0):
        return OracleResult(False, None, g)

    emb = {v: Point(Fraction(int(xs[i])), Fraction(int(ys[i]))) for v, i in zip(order, chosen)}
    # the oracle's answer is itself a certificate; re-check it exactly
    if not verify(cs, emb).ok:
        raise SoundnessViolation("Grid oracle produced an embedding that fails verification.")
    return OracleResult(True, emb, g)


# ---------------------------------------------------------
# Energy and annealing
# ---------------------------------------------------------

class _EnergyModel:
    """Constraint arrays for vectorized hinge energy."""

    def __init__(self, cs: ConstraintSet, order: Sequence[str], margin: float):
        index = {v: k for k, v in enumerate(order)}
        rows = list(cs)
        self.a = np.array([index[t[0]] for t, _ in rows], dtype=np.int64)
        self.b = np.array([index[t[1]] for t, _ in rows], dtype=np.int64)
        self.c = np.array([index[t[2]] for t, _ in rows], dtype=np.int64)
        self.sign = np.array(
            [{Orientation.L: 1.0, Orientation.R: -1.0, Orientation.C: 0.0}[v] for _, v in rows]
        )
        self.margin = float(margin)
        self.touching = [
            np.flatnonzero((self.a == k) | (self.b == k) | (self.c == k)) for k in range(len(order))
        ]

    def terms(self, P: np.ndarray, rows: np.ndarray | slice = slice(None)) -> np.ndarray:
        A, B, C = P[self.a[rows]], P[self.b[rows]], P[self.c[rows]]
        area = (B[:, 0] - A[:, 0]) * (C[:, 1] - A[:, 1]) - (B[:, 1] - A[:, 1]) * (C[:, 0] - A[:, 0])
        sign = self.sign[rows]
        strict = np.maximum(0.0, self.margin - sign * area)
        return np.where(sign == 0.0, np.abs(area), strict)

    def total(self, P: np.ndarray) -> float:
        return float(self.terms(P).sum()) if len(self.a) else 0.0


def energy(cs: ConstraintSet, placement: Mapping[str, Sequence[float]], margin=DEFAULT_MARGIN) -> float:
    """Sum of hinge penalties over all constraints."""
    order = list(placement)
    model = _EnergyModel(cs, order, float(margin))
    P = np.array([[float(placement[v][0]), float(placement[v][1])] for v in order], dtype=float)
    return model.total(P)


def _snap(cs: ConstraintSet, order: Sequence[str], P: np.ndarray) -> Embedding | None:
    """Dyadic rationals at precision 2^-k for growing k until exact verification passes."""
    for k in range(MAX_SNAP_BITS + 1):
        scale = 2 ** k
        emb = {
            v: Point(Fraction(round(P[i, 0] * scale), scale), Fraction(round(P[i, 1] * scale), scale))
            for i, v in enumerate(order)
        }
        if verify(cs, emb).ok:
            return emb
    return None


@dataclass
class _RestartResult:
    index: int
    embedding: Embedding | None
    iterations: int
    trace: list[float]


def _one_restart(
    cs: ConstraintSet,
    order: Sequence[str],
    model: _EnergyModel,
    params: SearchParams,
    index: int,
    seed_seq: np.random.SeedSequence,
) -> _RestartResult:
    rng = np.random.default_rng(seed_seq)
    n = len(order)
    spread = 4.0 * model.margin * math.sqrt(max(n, 1))
    P = rng.uniform(-spread, spread, size=(n, 2))
    current = model.total(P)
    temperature = params.temperature
    trace = [current]

    last_snap = -100
    for it in range(1, params.iterations + 1):
        if current <= 1e-9 and it - last_snap >= 100 and model.total(P) <= 0.0:
            last_snap = it
            emb = _snap(cs, order, P)
            if emb is not None:
                return _RestartResult(index, emb, it, trace)
        k = int(rng.integers(n))
        rows = model.touching[k]
        step = rng.normal(0.0, spread * 0.05 * math.sqrt(temperature / params.temperature) + 1e-3, 2)
        before = float(model.terms(P, rows).sum())
        old = P[k].copy()
        P[k] += step
        delta = float(model.terms(P, rows).sum()) - before
        if delta <= 0.0 or rng.random() < math.exp(-delta / max(temperature, 1e-12)):
            current += delta
        else:
            P[k] = old
        temperature *= params.cooling
        if it % 100 == 0:
            current = model.total(P)  # resync accumulated float drift
            trace.append(current)

    emb = _snap(cs, order, P) if model.total(P) <= 0.0 else None
    return _RestartResult(index, emb, params.iterations, trace)


def anneal(cs: ConstraintSet | Inconsistent, params: SearchParams = SearchParams()) -> SearchOutcome:
    if isinstance(cs, Inconsistent):
        return SearchOutcome(Verdict.UNREALIZABLE, certificate=cs)

    order = list(cs.universe)
    if len(cs) == 0:
        emb = {v: Point(Fraction(k), Fraction(k * k)) for k, v in enumerate(order)}
        return SearchOutcome(Verdict.REALIZED, emb)

    model = _EnergyModel(cs, order, float(params.margin))
    seeds = np.random.SeedSequence(params.seed).spawn(params.restarts)

    def run(i: int) -> _RestartResult:
        logger.debug("anneal: restart %d", i)
        return _one_restart(cs, order, model, params, i, seeds[i])

    results: list[_RestartResult] = []
    if params.workers > 1:
        with ThreadPoolExecutor(max_workers=params.workers) as pool:
            results = list(pool.map(run, range(params.restarts)))
    else:
        for i in range(params.restarts):
            results.append(run(i))
            if results[-1].embedding is not None:
                break

    winner = next((r for r in results if r.embedding is not None), None)
    used = results if winner is None else [r for r in results if r.index <= winner.index]
    stats = SearchStats(
        restarts_used=len(used),
        iterations=sum(r.iterations for r in used),
        trace_length=sum(len(r.trace) for r in used),
    )
    if winner is None:
        return SearchOutcome(Verdict.UNKNOWN, stats=stats)
    if not verify(cs, winner.embedding).ok:
        raise SoundnessViolation("Annealing certified an embedding that fails verification.")
    return SearchOutcome(Verdict.REALIZED, winner.embedding, stats=stats)


def solve(
    cs: ConstraintSet | Inconsistent,
    params: SearchParams = SearchParams(),
    *,
    oracle_limit: int = GRID_UNIVERSE_LIMIT,
) -> SearchOutcome:
    """Closure, then the grid oracle for small universes, then annealing."""
    if isinstance(cs, Inconsistent):
        return SearchOutcome(Verdict.UNREALIZABLE, certificate=cs)
    grid_checked = None
    if len(cs.universe) <= oracle_limit:
        found = grid_oracle(cs, params.grid, limit=oracle_limit)
        if found.realizable:
            return SearchOutcome(Verdict.REALIZED, found.embedding)
        grid_checked = params.grid
    outcome = anneal(cs, params)
    if outcome.verdict is Verdict.UNKNOWN and grid_checked is not None:
        stats = outcome.stats
        outcome = SearchOutcome(
            Verdict.UNKNOWN,
            stats=SearchStats(stats.restarts_used, stats.iterations, stats.trace_length, grid_checked),
        )
    return outcome


# ---------------------------------------------------------
# Random realizable walks
# ---------------------------------------------------------

def _sample_points(rng: np.random.Generator, n: int, grid: int, budget: int) -> Embedding:
    for _ in range(budget):
        raw = rng.integers(0, grid, size=(n, 2))
        emb = {f"v{k}": Point(Fraction(int(x)), Fraction(int(y))) for k, (x, y) in enumerate(raw)}
        if is_general_position(emb):
            return emb
    raise RejectionBudgetExhausted(f"No generic {n}-point sample within {budget} tries.")


def _sample_sequence(
    rng: np.random.Generator,
    names: Sequence[str],
    t: int,
    forbid_repeated_edges: bool,
) -> list[str] | None:
    seq = [names[int(rng.integers(len(names)))]]
    seen: set[frozenset[str]] = set()
    while len(seq) < t:
        banned = {seq[-1]}
        if len(seq) >= 2:
            banned.add(seq[-2])
        options = [v for v in names if v not in banned]
        if forbid_repeated_edges:
            options = [v for v in options if frozenset((seq[-1], v)) not in seen]
        if not options:
            return None
        nxt = options[int(rng.integers(len(options)))]
        seen.add(frozenset((seq[-1], nxt)))
        seq.append(nxt)
    return seq


def sample_walk(
    n_vertices: int,
    t: int,
    seed=DEFAULT_SEED,
    *,
    forbid_repeated_edges: bool = False,
    grid: int = SAMPLE_GRID,
    budget: int = SAMPLE_REJECTION_BUDGET,
) -> tuple[DirectionalWalk, Embedding]:
    """A walk together with a realization of it; the turns are read off the points."""
    if n_vertices < 3 or t < 3:
        raise ValueError(f"sample_walk needs n_vertices >= 3 and t >= 3, got {n_vertices}, {t}")
    rng = np.random.default_rng(seed)
    emb = _sample_points(rng, n_vertices, grid, budget)
    names = list(emb)
    for _ in range(budget):
        seq = _sample_sequence(rng, names, t, forbid_repeated_edges)
        if seq is not None:
            walk = walk_of_sequence(seq, emb)
            return walk, {v: emb[v] for v in walk.vertices}
    raise RejectionBudgetExhausted(f"No walk of length {t} over {n_vertices} points within {budget} tries.")


def sample_degenerate_constraints(n_vertices: int, seed=DEFAULT_SEED, *, per_vertex: int = 2) -> ConstraintSet:
    """
    Random strict constraints where every vertex after the first two lies in at
    most `per_vertex` triples with earlier vertices; the default gives a
    2-degenerate set.
    """
    if n_vertices < 3:
        raise ValueError(f"Need at least 3 vertices, got {n_vertices}")
    rng = np.random.default_rng(seed)
    names = [f"v{k}" for k in range(n_vertices)]
    rows = []
    for k in range(2, n_vertices):
        pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
        picks = rng.choice(len(pairs), size=min(per_vertex, len(pairs)), replace=False)
        for idx in picks:
            a, b = pairs[int(idx)]
            turn = Orientation.L if rng.random() < 0.5 else Orientation.R
            rows.append(((names[a], names[b], names[k]), turn))
    # every triple appears once, so closure cannot fail
    return canonicalize(rows, universe=names)
