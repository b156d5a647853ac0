import pytest

from finitespaces import classify, coeff, models
from finitespaces.coeff import findimq as fq
from finitespaces.errors import BackendLimitation, ValidationError
from finitespaces.poset import antichain, build_preorder, chain_poset
from finitespaces.space import SpaceMorphism, identity_morphism, to_point
from finitespaces.verdict import Value

from gen import zconst_space


@pytest.mark.parametrize("make, key", [
    (models.pseudocircle, "pseudocircle"),
    (models.p1_model, "P1"),
    (models.doubled_origin_line, "doubled_origin_line"),
    (models.doubled_origin_plane, "doubled_origin_plane"),
])
def test_classification_tables(make, key):
    X = make()
    exp = models.EXPECTED[key]
    checks = {
        "schematic": classify.is_schematic,
        "semiseparated": classify.is_semiseparated,
        "affine": lambda X: classify.is_affine_certified(X),
    }
    for name, fn in checks.items():
        if name in exp:
            assert fn(X).value.value == exp[name], name


def test_semiseparation_witness_on_doubled_plane():
    v = classify.is_semiseparated(models.doubled_origin_plane())
    exp = models.EXPECTED["doubled_origin_plane"]["semiseparated_witness"]
    assert set(v.witness["pair"]) == set(exp["pair"])
    assert v.witness["degree"] == exp["degree"]


def test_qc_refinement_is_qc_isomorphism():
    f = models.qc_refinement()
    v = classify.is_qc_isomorphism(f)
    assert v.value.value == models.EXPECTED["qc_refinement"]["qc_isomorphism"]
    assert classify.is_schematic_morphism(f)


@pytest.mark.parametrize("X, value", [
    (zconst_space(chain_poset(2)), Value.YES),                                  # minimum
    (zconst_space(build_preorder("abc", [("a", "c"), ("b", "c")])), Value.YES),  # contractible, no minimum
    (models.pseudocircle(), Value.NO),                                          # not acyclic
    (zconst_space(antichain(2)), Value.UNKNOWN),                                # disconnected
])
def test_affine_cascade(X, value):
    assert classify.is_affine_certified(X).value is value


def test_affine_of_open_subset():
    X = models.pseudocircle()
    assert classify.is_affine_certified(X, ["u", "w1", "w2"])
    with pytest.raises(ValidationError, match="open"):
        classify.is_affine_certified(X, ["w1", "u"][:1] + ["v"])


def test_topological_criterion():
    X = zconst_space(chain_poset(2))
    assert classify.topological_criterion(identity_morphism(X))
    # over a point U_xy = U_x, which is contractible
    assert classify.topological_criterion(to_point(models.pseudocircle()))
    # the identity of the pseudocircle has U_(u,v) = {w1, w2}
    assert classify.topological_criterion(identity_morphism(models.pseudocircle())).is_no
    with pytest.raises(BackendLimitation):
        classify.topological_criterion(to_point(models.two_point_spec()))


@pytest.mark.parametrize("make", [models.pseudocircle, models.two_point_spec, models.dual_point])
def test_identity_is_schematic_iff_space_is(make):
    X = make()
    assert bool(classify.is_schematic_morphism(identity_morphism(X))) == bool(classify.is_schematic(X))


def test_stein_factorization_of_identity_like_map():
    f = to_point(models.two_point_spec())
    sf = classify.stein_factorization(f)
    assert len(sf.middle.points) == 1
    assert all(sf.certificates.values())
    assert sf.middle.ring("*").dim == 2


def test_fibered_product_with_point():
    A = fq.dual_numbers()
    pt = models.punctual(A)
    idp = identity_morphism(pt)
    res = classify.schematic_fibered_product(idp, idp)
    assert len(res.product.space.points) == 1
    assert all(res.certificates.values())
    assert "pushforward_tensor" in res.certificates
