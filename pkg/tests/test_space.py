import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitespaces import coeff, models
from finitespaces.coeff import findimq as fq
from finitespaces.coeff import graded as gr
from finitespaces.coeff.base import RingHom
from finitespaces.coeff.matrix import Mat
from finitespaces.errors import BackendLimitation, BackendMismatch, ValidationError
from finitespaces.poset import build_preorder, chain_poset
from finitespaces.space import (
    RingedSpace,
    SpaceMorphism,
    as_finite_space,
    compose,
    global_sections,
    graphic,
    identity_morphism,
    inclusion_morphism,
    is_finite_space,
    product_space,
    punctual,
    t0_ringed,
    to_point,
)

from gen import random_poset, random_qspace

QB, GB = coeff.QB, coeff.GB

SWAP = Mat([[0, 1], [1, 0]], 2, 2)
ID2 = Mat.identity(2)


def diamond(top_map):
    """a < b, c < d with Q x Q everywhere; every restriction is the identity
    except c -> d, which is ``top_map``."""
    P = build_preorder("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    A = fq.split_algebra(2)
    res = {(p, q): RingHom(A, A, ID2) for p, q in P.covers()}
    res[("c", "d")] = RingHom(A, A, top_map)
    return RingedSpace(P, {p: A for p in P.points}, res)


def test_restrictions_must_commute():
    diamond(ID2)
    with pytest.raises(ValidationError, match="commute"):
        diamond(SWAP)


def test_missing_restriction_off_zconst():
    P = chain_poset(1)
    A = fq.field()
    with pytest.raises(ValidationError, match="missing restriction"):
        RingedSpace(P, {p: A for p in P.points}, {})


def test_mixed_backends_rejected():
    P = chain_poset(1)
    with pytest.raises(BackendMismatch):
        RingedSpace(P, {"c0": coeff.ZZ, "c1": fq.field()}, {})


@pytest.mark.parametrize("make, finite", [
    (models.two_point_spec, True),
    (models.p1_model, True),
    (models.doubled_origin_plane, True),
    (lambda: chain_space_dual_to_field(), False),
])
def test_flatness(make, finite):
    X = make()
    assert bool(is_finite_space(X)) is finite
    if not finite:
        with pytest.raises(ValidationError, match="flat"):
            as_finite_space(X)


def chain_space_dual_to_field():
    A, k = fq.dual_numbers(), fq.field()
    return models.chain_space(1, [A, k], {(0, 1): RingHom(A, k, Mat([[1, 0]], 1, 2))})


@pytest.mark.parametrize("make, signs", [
    (models.p1_model, ("0",)),
    (models.doubled_origin_line, ("+",)),
    (models.doubled_origin_plane, ("+", "+")),
])
def test_graded_global_sections(make, signs):
    A, maps = global_sections(make())
    assert A.signs == signs


def test_global_sections_zconst_and_findimq():
    A, _ = global_sections(models.pseudocircle())
    assert A == coeff.ZZ
    with pytest.raises(BackendLimitation):
        global_sections(models.pseudocircle(), ["w1", "w2"])
    A, maps = global_sections(models.two_point_spec())
    assert A.dim == 2  # Q x Q, the ring at the closed point
    assert QB.is_ring_iso(maps["s"])


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_global_sections_are_an_equalizer(seed, n):
    rng = random.Random(seed)
    X = random_qspace(rng, random_poset(rng, n))
    A, maps = global_sections(X)
    comps = X.poset.components()
    assert A.dim >= len(comps)
    for p, q in X.covers():
        assert X.res(p, q) @ maps[p] == maps[q]
    # with a minimum, sections are the ring there
    for c in comps:
        m = X.poset.minimum(c)
        if m is not None and len(comps) == 1:
            assert A.dim == X.ring(m).dim


def test_t0_quotient_of_ringed_preorder():
    P = build_preorder(["a", "b", "c"], [("a", "b"), ("b", "a"), ("b", "c")])
    X = RingedSpace(P, {p: coeff.ZZ for p in P.points}, {})
    X0, retr, inc = t0_ringed(X)
    assert len(X0.points) == 2 and X0.poset.is_poset()
    assert retr("b") == retr("a")
    assert compose(retr, inc).pointmap == {p: p for p in X0.points}


def test_comorphism_square_checked():
    A, k = fq.split_algebra(2), fq.field()
    P = chain_poset(1)
    first = RingHom(A, k, Mat([[1, 0]], 1, 2))
    second = RingHom(A, k, Mat([[0, 1]], 1, 2))
    X = RingedSpace(P, {"c0": A, "c1": k}, {("c0", "c1"): first})
    pt = punctual(A)
    SpaceMorphism(X, pt, {"c0": "*", "c1": "*"}, {"c0": QB.identity_hom(A), "c1": first})
    with pytest.raises(ValidationError, match="commute"):
        SpaceMorphism(X, pt, {"c0": "*", "c1": "*"}, {"c0": QB.identity_hom(A), "c1": second})


def test_product_of_projective_lines():
    X = models.p1_model()
    fp = product_space(X, X)
    Z = fp.space
    assert len(Z.points) == 9
    assert Z.ring(("x1", "x2")).signs == ("+", "-")
    assert Z.dimension() == 2
    assert is_finite_space(Z)


def test_graphic_is_a_section_of_the_first_projection():
    f = models.qc_refinement()
    G, fp = graphic(f)
    comp = compose(fp.p1, G)
    X = f.source
    assert all(comp(x) == x for x in X.points)
    assert all(comp.co(x) == X.backend.identity_hom(X.ring(x)) for x in X.points)


def test_inclusion_and_identity():
    X = models.pseudocircle()
    i = inclusion_morphism(X, ["w1", "w2"])
    assert set(i.source.points) == {"w1", "w2"}
    assert compose(identity_morphism(X), i).pointmap == i.pointmap
    f = to_point(X)
    assert set(f.preimage(["*"])) == set(X.points)
