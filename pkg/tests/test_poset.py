import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitespaces.errors import DuplicatePointError, SearchBudgetExceeded, UnknownPointError, ValidationError
from finitespaces.poset import (
    MonotoneMap,
    Preorder,
    antichain,
    build_preorder,
    chain_poset,
    fibered_product_poset,
    iter_poset_isos,
    monotone_maps,
    poset_iso,
    posets_up_to_iso,
    product,
    t0_quotient,
)


@st.composite
def preorders(draw, max_points=6, allow_cycles=True):
    n = draw(st.integers(1, max_points))
    pts = [f"x{i}" for i in range(n)]
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and (allow_cycles or a < b)]
    rels = draw(st.lists(st.sampled_from(pairs), max_size=2 * n, unique=True)) if pairs else []
    return build_preorder(pts, [(pts[a], pts[b]) for a, b in rels])


def brute_monotone(P, Q):
    pts, tpts = P.sorted_points(), Q.sorted_points()
    out = []
    for imgs in itertools.product(tpts, repeat=len(pts)):
        m = dict(zip(pts, imgs))
        if all(Q.leq(m[a], m[b]) for a, b in P.relation_pairs()):
            out.append(m)
    return out


# known counts: partial orders on n unlabeled points (1, 1, 2, 5, 16, 63)
@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 16), (5, 63)])
def test_posets_up_to_iso_counts(n, count):
    ps = posets_up_to_iso(n)
    assert len(ps) == count
    for a, b in itertools.combinations(ps, 2):
        assert poset_iso(a, b) is None


@given(preorders())
def test_closure_is_reflexive_transitive(P):
    for p in P.points:
        assert P.leq(p, p)
        for q in P.min_open(p):
            assert P.min_open(q) <= P.min_open(p)
            assert p in P.closure(q)


@given(preorders())
def test_minimal_opens_are_open_and_closures_closed(P):
    for p in P.points:
        assert P.is_open(P.min_open(p))
        assert P.is_closed(P.closure(p))
        assert P.open_hull([p]) == P.min_open(p)


@given(preorders(allow_cycles=False))
def test_covers_generate_order(P):
    Q = build_preorder(P.points, P.covers())
    assert Q == P
    for p, q in P.covers():
        assert P.lt(p, q)
        assert not any(P.lt(p, r) and P.lt(r, q) for r in P.points)


@given(preorders(max_points=5), preorders(max_points=3))
def test_monotone_maps_match_brute_force(P, Q):
    got = list(monotone_maps(P, Q))
    assert sorted(map(lambda m: sorted(m.items()), got)) == sorted(map(lambda m: sorted(m.items()), brute_monotone(P, Q)))


@given(preorders(allow_cycles=False))
def test_chains_and_dimension_agree_with_brute_force(P):
    pts = P.sorted_points()
    for n in range(0, 4):
        brute = [c for c in itertools.permutations(pts, n + 1) if all(P.lt(a, b) for a, b in zip(c, c[1:]))]
        assert sorted(P.chains(n)) == sorted(brute)
    dim = max(n for n in range(len(pts)) if P.chains(n))
    assert P.dimension() == dim


@given(preorders())
def test_t0_quotient_is_poset_and_monotone(P):
    Q, qmap = t0_quotient(P)
    assert Q.is_poset()
    for a, b in P.relation_pairs():
        assert Q.leq(qmap[a], qmap[b])
    assert len(Q) == len({frozenset(q for q in P.points if P.equivalent(p, q)) for p in P.points})


@given(preorders(max_points=4))
def test_components_partition(P):
    comps = P.components()
    assert set().union(*comps) == set(P.points)
    assert sum(len(c) for c in comps) == len(P.points)
    for c in comps:
        assert P.is_connected(c)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_chain_dimension(n):
    assert chain_poset(n).dimension() == n
    assert antichain(n + 1).dimension() == 0


def test_pseudocircle_poset_basics():
    P = build_preorder(["u", "v", "w1", "w2"], [("u", "w1"), ("u", "w2"), ("v", "w1"), ("v", "w2")])
    assert P.min_open("u") == {"u", "w1", "w2"}
    assert P.closure("w1") == {"u", "v", "w1"}
    assert P.minimum() is None and P.maximum() is None
    assert P.dimension() == 1
    assert len(P.chains(1)) == 4


def test_product_and_fibered_product():
    C = chain_poset(1)
    pr = product(C, C)
    assert len(pr) == 4 and pr.dimension() == 2
    pt = build_preorder(["*"])
    f = MonotoneMap.make(C, pt, {"c0": "*", "c1": "*"})
    fp = fibered_product_poset(f, f)
    assert fp == pr


def test_isomorphism_search():
    a = build_preorder(["a", "b", "c"], [("a", "b"), ("a", "c")])
    b = build_preorder(["x", "y", "z"], [("y", "x"), ("y", "z")])
    iso = poset_iso(a, b)
    assert iso["a"] == "y"
    assert len(list(iter_poset_isos(a, b))) == 2
    with pytest.raises(SearchBudgetExceeded):
        poset_iso(antichain(6), antichain(6, "b"), budget=3)


def test_validation_errors():
    with pytest.raises(DuplicatePointError):
        build_preorder(["a", "a"])
    with pytest.raises(UnknownPointError):
        build_preorder(["a"], [("a", "b")])
    with pytest.raises(ValidationError):
        Preorder(["a", "b", "c"], [[1, 1, 0], [0, 1, 1], [0, 0, 1]])  # not transitive
    C = chain_poset(1)
    with pytest.raises(ValidationError):
        MonotoneMap.make(C, C, {"c0": "c1", "c1": "c0"})
