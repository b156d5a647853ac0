import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitespaces import coeff, models
from finitespaces.cohomology import cohomology
from finitespaces.coeff import findimq as fq
from finitespaces.errors import BackendLimitation, ValidationError
from finitespaces.homotopy import (
    BeatPoint,
    Fence,
    contraction_fence,
    core,
    find_beat_points,
    homotopic_topological,
    homotopy_equivalent,
    leq_morphisms,
    pullback_homotopy_invariance_check,
    remove_beat_point,
    ringed_isomorphism,
    verify_fence,
)
from finitespaces.poset import build_preorder, chain_poset
from finitespaces.sheafmod import structure_sheaf
from finitespaces.space import RingedSpace, SpaceMorphism, compose, identity_morphism

from gen import random_qspace, random_poset, random_space, zconst_space

ZB = coeff.ZB
seeds = st.integers(0, 10 ** 6)
backends = st.sampled_from(["ZConst", "FinDimQ"])


def relabel(X, prefix="r"):
    names = {p: f"{prefix}{i}" for i, p in enumerate(X.points)}
    P = build_preorder(names.values(), [(names[p], names[q]) for p, q in X.poset.covers()])
    return RingedSpace(P, {names[p]: X.ring(p) for p in X.points},
                       {(names[p], names[q]): X.res(p, q) for p, q in X.covers()}, X.window)


@given(seeds, backends, st.integers(1, 7))
def test_core_is_minimal_and_a_retract(seed, backend, n):
    rng = random.Random(seed)
    X = random_space(rng, n, backend)
    res = core(X, seed=seed)
    C = res.core
    assert not find_beat_points(C)
    ri = compose(res.retraction, res.inclusion)
    assert all(ri(x) == x for x in C.points)
    assert len(res.trace) == len(X.points) - len(C.points)


@given(seeds, st.integers(1, 7))
def test_core_preserves_integral_cohomology(seed, n):
    rng = random.Random(seed)
    X = random_space(rng, n, "ZConst")
    C = core(X).core
    for i in range(0, 3):
        a = ZB.invariants(cohomology(structure_sheaf(X), None, i))
        b = ZB.invariants(cohomology(structure_sheaf(C), None, i))
        assert a == b


@given(seeds, st.integers(1, 6))
def test_ringed_isomorphism_finds_relabelings(seed, n):
    rng = random.Random(seed)
    X = random_qspace(rng, random_poset(rng, n))
    v, f = ringed_isomorphism(X, relabel(X))
    assert v and f is not None


def test_chain_contracts_and_pseudocircle_is_minimal():
    assert len(core(zconst_space(chain_poset(4))).core.points) == 1
    S = models.pseudocircle()
    assert not find_beat_points(S)
    assert homotopy_equivalent(S, zconst_space(chain_poset(2))).is_no
    assert homotopy_equivalent(models.cone(S), zconst_space(chain_poset(0)))


def test_up_beat_point_needs_ring_isomorphism():
    X = models.two_point_spec()  # s < g, O_s = Q x Q -> O_g = Q
    bs = find_beat_points(X)
    assert bs == [BeatPoint("g", "down", "s")]
    with pytest.raises(ValidationError):
        remove_beat_point(X, BeatPoint("s", "up", "g"))
    C = core(X).core
    assert C.points == ("s",) and C.ring("s").dim == 2


def test_ringed_isomorphism_distinguishes_rings():
    A, B = fq.split_algebra(2), fq.dual_numbers()
    X = models.punctual(A)
    Y = models.punctual(B)
    v, _ = ringed_isomorphism(X, Y)
    assert v.is_no


def test_topological_homotopy_on_zconst():
    X = zconst_space(chain_poset(2))
    pts = X.points
    const0 = SpaceMorphism(X, X, {p: "c0" for p in pts})
    const2 = SpaceMorphism(X, X, {p: "c2" for p in pts})
    assert homotopic_topological(const0, const2)
    assert homotopic_topological(identity_morphism(X), const0)
    S = models.pseudocircle()
    assert not homotopic_topological(identity_morphism(S), SpaceMorphism(S, S, {p: "u" for p in S.points}))
    with pytest.raises(BackendLimitation):
        homotopic_topological(identity_morphism(models.two_point_spec()), identity_morphism(models.two_point_spec()))


def test_fences():
    X = models.cone(models.pseudocircle())
    F = contraction_fence(X)
    assert verify_fence(F)
    assert pullback_homotopy_invariance_check(F, structure_sheaf(X))
    assert leq_morphisms(F.maps[1], F.maps[0]) is not None
    bad = Fence(F.maps, [True])
    assert not verify_fence(bad)
    with pytest.raises(ValidationError):
        Fence(F.maps, [])


def test_core_needs_t0_quotient_first():
    P = build_preorder(["a", "b"], [("a", "b"), ("b", "a")])
    X = zconst_space(P)
    with pytest.raises(ValidationError, match="T0"):
        find_beat_points(X)
    assert len(core(X).core.points) == 1
