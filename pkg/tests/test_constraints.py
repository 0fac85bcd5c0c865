from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import assume, given, settings, strategies as st

from src.constraints import (
    ConstraintSet,
    DegeneracyCertificate,
    Hypergraph,
    Inconsistent,
    NotKDegenerate,
    canonical_triple,
    canonicalize,
    degeneracy_order,
    embed_degenerate,
    from_triples,
    has_distinct_slopes,
    require_consistent,
    verify,
)
from src.errors import (
    CollinearConstraintUnsupported,
    InconsistentConstraintsError,
    MissingVertexError,
    NotDegenerateError,
    RepeatedVertexError,
    UnknownVertexError,
)
from src.geometry_core import AffineMap, Orientation, orient, point
from src.search import sample_degenerate_constraints

L, R, C = Orientation.L, Orientation.R, Orientation.C


def test_canonical_triple_parity():
    assert canonical_triple(("a", "b", "c")) == (("a", "b", "c"), False)
    assert canonical_triple(("b", "a", "c")) == (("a", "b", "c"), True)
    assert canonical_triple(("c", "a", "b")) == (("a", "b", "c"), False)


def test_canonicalize_merges_permutations():
    cs = canonicalize([(("b", "c", "a"), L), (("a", "b", "c"), L), (("c", "b", "a"), R)])
    assert isinstance(cs, ConstraintSet)
    assert len(cs) == 1
    assert cs.get(("a", "b", "c")) is L
    assert cs.get(("b", "a", "c")) is R
    assert cs.universe == ("a", "b", "c")


@pytest.mark.parametrize("first", list(permutations("abc")))
@pytest.mark.parametrize("second", list(permutations("abc")))
def test_every_transposition_conflict_is_caught(first, second):
    same_parity = canonical_triple(first)[1] == canonical_triple(second)[1]
    agreeing = L if same_parity else R
    ok = canonicalize([(first, L), (second, agreeing)])
    assert isinstance(ok, ConstraintSet)

    clash = canonicalize([(first, L), (second, -agreeing)])
    assert isinstance(clash, Inconsistent)
    assert clash.triple == ("a", "b", "c")
    assert "contradicts" in clash.describe()


def test_witness_does_not_depend_on_input_order():
    raw = [(("a", "b", "c"), L), (("b", "a", "c"), L), (("x", "y", "z"), L), (("y", "x", "z"), L)]
    assert canonicalize(raw) == canonicalize(list(reversed(raw)))
    assert canonicalize(raw).triple == ("a", "b", "c")


def test_require_raises_with_witness():
    bad = canonicalize([(("a", "b", "c"), L), (("b", "a", "c"), L)])
    with pytest.raises(InconsistentConstraintsError) as info:
        require_consistent(bad)
    assert info.value.inconsistent == bad
    with pytest.raises(InconsistentConstraintsError):
        bad.require()
    good = canonicalize([(("a", "b", "c"), L)])
    assert require_consistent(good) is good
    assert good.require() is good


def test_canonicalize_input_errors():
    with pytest.raises(RepeatedVertexError):
        canonicalize([(("a", "a", "b"), L)])
    with pytest.raises(UnknownVertexError):
        canonicalize([(("a", "b", "q"), L)], universe=["a", "b", "c"])


def test_from_triples_reads_letters_in_any_case():
    cs = from_triples([["a", "b", "c", "l"], ["a", "b", "d", "R"]], universe=["a", "b", "c", "d"])
    assert cs.get(("a", "b", "d")) is R
    assert list(cs.to_frame().columns) == ["a", "b", "c", "orientation"]


def test_verify_reports_each_wrong_triple():
    cs = from_triples([["a", "b", "c", "L"], ["a", "b", "d", "L"]])
    emb = {"a": point(0, 0), "b": point(1, 0), "c": point(0, 1), "d": point(0, -1)}
    report = verify(cs, emb)
    assert len(report) == 1
    assert report.violations[0].triple == ("a", "b", "d")
    assert report.violations[0].actual is R
    assert len(report.to_frame()) == 1


coarse = st.integers(-5, 5)
entries = st.integers(-3, 3).map(Fraction)


@given(
    st.lists(st.builds(point, coarse, coarse), min_size=5, max_size=5),
    st.tuples(entries, entries, entries, entries, entries, entries),
)
def test_verify_follows_orientation_preserving_maps_and_flips_under_reflection(pts, coeffs):
    a, b, c, d, e, f = coeffs
    assume(a * d - b * c > 0)
    emb = dict(zip("pqrst", pts))
    # prescribe what the points show, collinear triples included
    cs = from_triples([[*t, orient(*(emb[v] for v in t)).letter] for t in combinations("pqrst", 3)])
    assert verify(cs, emb).ok
    assert verify(cs, AffineMap(a, b, c, d, e, f).apply(emb)).ok

    mirrored = verify(cs, AffineMap.mirror_x().apply(emb))
    flipped = {v.triple for v in mirrored.violations}
    assert flipped == {t for t, value in cs if value is not C}
    assert all(v.actual is -v.prescribed for v in mirrored.violations)


def test_verify_missing_vertex():
    cs = from_triples([["a", "b", "c", "L"]])
    with pytest.raises(MissingVertexError):
        verify(cs, {"a": point(0, 0), "b": point(1, 0)})


def test_degeneracy_order_on_complete_hypergraphs():
    def complete(names):
        return Hypergraph(tuple(names), frozenset(frozenset(t) for t in permutations(names, 3)))

    k4 = complete("abcd")
    assert isinstance(degeneracy_order(k4, 2), NotKDegenerate)
    cert = degeneracy_order(k4, 3)
    assert isinstance(cert, DegeneracyCertificate)
    assert sorted(cert.ordering) == ["a", "b", "c", "d"]
    assert all(d <= 3 for d in cert.back_degree.values())


def test_degeneracy_order_is_deterministic():
    h = Hypergraph(("a", "b", "c", "d"), frozenset({frozenset("abc"), frozenset("bcd")}))
    cert = degeneracy_order(h, 1)
    # peeling removes a, then b, c, d; the ordering is the reverse
    assert cert.ordering == ("d", "c", "b", "a")
    assert cert.back_degree["a"] == 1


def test_embed_degenerate_small_case():
    cs = from_triples([["a", "b", "c", "L"], ["a", "b", "d", "R"], ["a", "c", "d", "L"]])
    emb = embed_degenerate(cs)
    assert verify(cs, emb).ok
    assert has_distinct_slopes(emb)


def test_embed_degenerate_rejects_collinear_and_dense_sets():
    with pytest.raises(CollinearConstraintUnsupported):
        embed_degenerate(from_triples([["a", "b", "c", "C"]]))
    dense = from_triples([[*t, "L"] for t in (("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d"))])
    with pytest.raises(NotDegenerateError):
        embed_degenerate(dense)


def test_embed_degenerate_with_empty_constraints():
    emb = embed_degenerate(ConstraintSet(("p", "q", "r"), {}))
    assert set(emb) == {"p", "q", "r"}
    assert has_distinct_slopes(emb)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 14), st.integers(0, 10_000))
def test_embed_degenerate_random_sets(n, seed):
    cs = sample_degenerate_constraints(n, seed)
    emb = embed_degenerate(cs)
    assert not verify(cs, emb)
    assert has_distinct_slopes(emb)


@pytest.mark.slow
def test_embed_degenerate_hundred_sets():
    for seed in range(100):
        cs = sample_degenerate_constraints(3 + seed % 18, seed)
        emb = embed_degenerate(cs)
        assert verify(cs, emb).ok
        assert has_distinct_slopes(emb)


def test_has_distinct_slopes():
    assert not has_distinct_slopes({"a": point(0, 0), "b": point(1, 1), "c": point(2, 0), "d": point(3, 1)})
    assert has_distinct_slopes({"a": point(0, 0), "b": point(1, 1), "c": point(2, 5)})
