from fractions import Fraction

import pytest

from src.errors import (
    DegenerateTripleError,
    LengthMismatchError,
    NameCollisionError,
    RealizationInvalidError,
    SimultaneityViolation,
)
from src.geometry_core import AffineMap, Orientation, Region, is_general_position, orient, point, point_in_triangle
from src.search import sample_walk
from src.sge import sharing_profile, verify_simultaneous
from src.sge_reduction import (
    FRAME_GRAPH,
    P_PRIME_POS,
    X_POS,
    Y_POS,
    Z_POS,
    _outer_base,
    _outer_candidates,
    backward_chain,
    build_sge_instance,
    chain_to_frame,
    embed_sge_instance,
    extract_walk_realization,
    frame_side,
    normalize_embedding,
)
from src.walk import DirectionalWalk, parse_walk, realizes


@pytest.fixture
def short_walk():
    return parse_walk("a b^l c^r d")


@pytest.fixture
def short_embedding():
    return {"a": point(0, 0), "b": point(4, 0), "c": point(2, 3), "d": point(5, 4)}


@pytest.fixture
def short_instance(short_walk, short_embedding):
    rec = build_sge_instance(short_walk)
    return rec, embed_sge_instance(rec, short_embedding)


def test_t3_instance_sizes():
    rec = build_sge_instance(parse_walk("a b^l c"))
    coll = rec.collection
    assert len(coll.vertices) == 23
    assert coll.names == ["G_1", FRAME_GRAPH]
    assert coll.graphs["G_1"].number_of_edges() == 34


@pytest.mark.parametrize("t", [3, 5, 8])
def test_vertex_count_law(t):
    w, _ = sample_walk(6, t, seed=t, forbid_repeated_edges=True)
    coll = build_sge_instance(w).collection
    n = len(w.vertices)
    assert len(coll.vertices) == 12 * (t - 2) + 5 + 2 * n
    assert len(coll.vertices) < 14 * t
    assert len(coll.graphs) == t - 1


def test_repeat_free_walk_gives_edge_disjoint_graphs(short_walk):
    profile = sharing_profile(build_sge_instance(short_walk).collection)
    assert profile.edge_disjoint


def test_frame_graph_wiring(short_walk):
    rec = build_sge_instance(short_walk)
    fr = rec.frame
    G = rec.collection.graphs[FRAME_GRAPH]
    assert G.has_edge(fr.x, fr.y) and G.has_edge(fr.y, fr.z) and G.has_edge(fr.z, fr.x)
    assert all(G.has_edge(fr.p, u) for u in short_walk.vertices)
    assert all(G.has_edge(fr.p_prime, g.a) for g in rec.primed_gadgets)
    assert not any(G.has_edge(fr.p_prime, rec.walk_primes[u]) for u in short_walk.vertices)


def test_swap_map_is_an_involution(short_walk):
    rec = build_sge_instance(short_walk)
    swap = rec.swap_map()
    assert swap["a"] == "a'" and swap["a'"] == "a"
    assert swap[rec.frame.p] == rec.frame.p_prime
    assert rec.frame.x not in swap
    assert all(swap[swap[k]] == k for k in swap)


def test_build_guards():
    with pytest.raises(LengthMismatchError):
        build_sge_instance(DirectionalWalk(("a", "b"), ()))
    with pytest.raises(DegenerateTripleError):
        build_sge_instance(parse_walk("a b^l a"))
    with pytest.raises(NameCollisionError):
        build_sge_instance(parse_walk("frame.x b^l c"))
    with pytest.raises(NameCollisionError):
        build_sge_instance(parse_walk("a a'^l c"))


def test_embedding_is_simultaneous(short_instance):
    rec, emb = short_instance
    assert set(emb) == set(rec.collection.vertices)
    assert verify_simultaneous(rec.collection, emb).ok
    assert is_general_position(emb)
    assert frame_side(rec, emb) == "p"


def test_frame_vertices_keep_their_coordinates(short_instance):
    rec, emb = short_instance
    fr = rec.frame
    eps = Fraction(1, 1024)
    for name, target in ((fr.x, X_POS), (fr.y, Y_POS), (fr.z, Z_POS), (fr.p_prime, P_PRIME_POS)):
        assert abs(emb[name].x - target.x) <= eps
        assert abs(emb[name].y - target.y) <= eps


def test_embedding_needs_a_realization(short_walk, short_embedding):
    rec = build_sge_instance(short_walk)
    with pytest.raises(RealizationInvalidError):
        embed_sge_instance(rec, AffineMap.mirror_x().apply(short_embedding))


def test_extract_round_trip(short_walk, short_instance):
    rec, emb = short_instance
    R, flags = extract_walk_realization(rec, emb)
    assert set(R) == set(short_walk.vertices)
    assert realizes(short_walk, R)
    assert not flags.primed_swapped and not flags.reflected


def test_extract_after_swap_and_reflection(short_walk, short_instance):
    rec, emb = short_instance
    swap = rec.swap_map()
    disguised = AffineMap.mirror_x().apply({swap.get(k, k): p for k, p in emb.items()})
    assert frame_side(rec, disguised) == "p'"
    R, flags = extract_walk_realization(rec, disguised)
    assert flags.primed_swapped and flags.reflected
    assert realizes(short_walk, R)

    normalized, _ = normalize_embedding(rec, disguised)
    assert normalized == emb


def test_extract_rejects_crossing_embeddings(short_instance):
    rec, emb = short_instance
    broken = dict(emb)
    # every graph holds every vertex, so a coincidence breaks all of them
    broken["c"] = emb["a"]
    assert not verify_simultaneous(rec.collection, broken).ok
    with pytest.raises(SimultaneityViolation):
        extract_walk_realization(rec, broken)


def test_backward_chain_holds(short_instance):
    rec, emb = short_instance
    audits = backward_chain(rec, emb)
    assert len(audits) == 2
    assert all(a.holds for a in audits)
    assert [a.expected for a in audits] == [Orientation.L, Orientation.R]
    assert chain_to_frame(audits)["holds"].all()


def test_uvwxy_walk_instance(uvwxy_walk, uvwxy_embedding):
    rec = build_sge_instance(uvwxy_walk)
    emb = embed_sge_instance(rec, uvwxy_embedding)
    assert verify_simultaneous(rec.collection, emb).ok
    R, _ = extract_walk_realization(rec, emb)
    assert realizes(uvwxy_walk, R)


def test_second_corner_nearly_level_with_the_top():
    # the ray through K2 only points down once K2 - K3 is weighted below 1/100
    K1 = point(10, Fraction(101, 1000))
    K2 = point(Fraction(101, 10), Fraction(1, 10))
    K3 = point(10, 0)
    assert orient(K1, K2, K3) is Orientation.R

    b = _outer_base(K1, K2, K3)
    assert b.y == -2 and b.x > 1
    assert orient(K1, K2, b) is not orient(K1, K2, K3)
    assert orient(K3, K2, b) is not orient(K3, K2, K1)

    a, b2, c = next(_outer_candidates(K1, K2, K3))
    assert b2 == b and a.y == 2 and a.x > 1
    assert orient(a, b, c) is Orientation.R
    assert all(point_in_triangle(K, a, b, c) is Region.INTERIOR for K in (K1, K2, K3))


@pytest.mark.parametrize(
    "n, t, seed, notation",
    [(7, 5, 1640795442, "v3 v2^r v0^r v1^r v6")],
)
def test_sampled_instance_with_a_level_primed_triangle(n, t, seed, notation):
    w, R = sample_walk(n, t, seed, forbid_repeated_edges=True)
    assert w.notation() == notation
    rec = build_sge_instance(w)
    emb = embed_sge_instance(rec, R)
    assert verify_simultaneous(rec.collection, emb).ok
    recovered, flags = extract_walk_realization(rec, emb)
    assert realizes(w, recovered)
    assert not flags.primed_swapped
    assert chain_to_frame(backward_chain(rec, emb))["holds"].all()


@pytest.mark.slow
def test_hundred_round_trips():
    for seed in range(100):
        t = 3 + seed % 8
        w, R = sample_walk(6 + seed % 3, t, 500 + seed, forbid_repeated_edges=True)
        rec = build_sge_instance(w)
        assert sharing_profile(rec.collection).edge_disjoint
        emb = embed_sge_instance(rec, R)
        assert verify_simultaneous(rec.collection, emb).ok
        swap = rec.swap_map()
        disguised = AffineMap.mirror_x().apply({swap.get(k, k): p for k, p in emb.items()})
        for candidate in (emb, disguised):
            recovered, _ = extract_walk_realization(rec, candidate)
            assert realizes(w, recovered)
