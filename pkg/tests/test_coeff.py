from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from finitespaces import coeff
from finitespaces.coeff import findimq as fq
from finitespaces.coeff import graded as gr
from finitespaces.coeff import qmat
from finitespaces.coeff.base import DegreeWindow, ModMap, RingHom
from finitespaces.coeff.intmat import determinant, smith_normal_form, solve_int
from finitespaces.coeff.matrix import Mat
from finitespaces.coeff.zconst import ZModule
from finitespaces.errors import BackendMismatch, ValidationError

ZB, QB, GB = coeff.ZB, coeff.QB, coeff.GB


def int_matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(0, max_rows).flatmap(
        lambda m: st.integers(0, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m).map(
                lambda rows: Mat(rows, m, n))))


# Smith normal form --------------------------------------------------------------

@given(int_matrices())
def test_snf_transforms_diagonalize(A):
    s = smith_normal_form(A)
    D = s.U @ A @ s.V
    m, n = A.shape
    for i in range(m):
        for j in range(n):
            expected = s.diag[i] if (i == j and i < len(s.diag)) else 0
            assert D[i, j] == expected
    assert s.U @ s.Uinv == Mat.identity(m)
    assert s.V @ s.Vinv == Mat.identity(n)
    assert all(b % a == 0 for a, b in zip(s.diag, s.diag[1:]))


@given(int_matrices(max_rows=4, max_cols=4))
def test_snf_matches_sympy(A):
    m, n = A.shape
    if m == 0 or n == 0:
        assert smith_normal_form(A).diag == []
        return
    S = sympy_snf(sympy.Matrix(A.tolist()), domain=sympy.ZZ)
    oracle = [abs(S[i, i]) for i in range(min(m, n)) if S[i, i] != 0]
    assert smith_normal_form(A).diag == sorted(oracle, key=lambda d: (d != 1, d))


@given(int_matrices(max_rows=3, max_cols=3, lo=-4, hi=4))
def test_determinant_matches_sympy(A):
    if A.nrows != A.ncols:
        return
    expected = sympy.Matrix(A.tolist()).det() if A.nrows else 1
    assert determinant(A) == expected


@given(int_matrices(max_rows=3, max_cols=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_solve_int_finds_preimages(A, x):
    x = x[: A.ncols]
    b = A.apply(x)
    sol = solve_int(A, b)
    assert sol is not None
    assert list(A.apply(sol)) == list(b)


# ZConst --------------------------------------------------------------------------

@pytest.mark.parametrize("rels, rank, torsion", [
    ([[2]], 0, [2]),
    ([[2, 0], [0, 3]], 0, [6]),
    ([[4, 0], [0, 6]], 0, [2, 12]),
    ([[1], [0]], 1, []),
    ([], 2, []),
])
def test_zmodule_invariants(rels, rank, torsion):
    n = len(rels) or 2
    M = ZModule(n, Mat(rels, n, len(rels[0])) if rels else None)
    assert ZB.invariants(M) == {"rank": rank, "torsion": torsion}


@given(int_matrices(max_rows=3, max_cols=3, lo=-3, hi=3))
def test_zconst_rank_nullity(A):
    """rank ker f + rank im f = rank of the source, for f between free groups."""
    m, n = A.shape
    f = ModMap(ZModule(n), ZModule(m), A, True)
    K, inc = ZB.kernel(f)
    C, _ = ZB.cokernel(f)
    r = qmat.rank(A.to_fractions()) if m and n else 0
    assert ZB.invariants(K)["rank"] == n - r
    assert ZB.invariants(C)["rank"] == m - r
    assert ZB.map_is_zero(ZB.compose(f, inc))


def test_zconst_map_must_respect_relations():
    Z2, Z = ZModule(1, Mat([[2]], 1, 1)), ZModule(1)
    with pytest.raises(ValidationError):
        ModMap(Z2, Z, Mat([[1]], 1, 1), True)
    assert ZB.map_is_zero(ModMap(Z2, Z, Mat([[0]], 1, 1), True))


def test_zconst_tensor():
    Z2, Z3 = ZB.cyclic(2), ZB.cyclic(3)
    assert ZB.is_zero(ZB.tensor(Z2, Z3))
    assert ZB.invariants(ZB.tensor(Z2, ZModule(2))) == {"rank": 0, "torsion": [2, 2]}


# FinDimQ -----------------------------------------------------------------------

@pytest.mark.parametrize("A", [fq.field(), fq.dual_numbers(), fq.truncated_polynomial(3), fq.split_algebra(3),
                               fq.product_algebra([fq.dual_numbers(), fq.field()])])
def test_algebras_are_commutative_associative(A):
    QAlg = fq.QAlgebra(A.mult, A.unit, A.labels, check=True)
    assert QAlg.dim == A.dim


def test_invalid_algebra_rejected():
    # e*e = 1 + e is commutative but the unit claim (0, 1) is wrong
    with pytest.raises(ValidationError):
        fq.QAlgebra([[[1, 0], [0, 1]], [[0, 1], [1, 1]]], [0, 1])


def test_ring_hom_checks_multiplicativity():
    A, k = fq.dual_numbers(), fq.field()
    RingHom(A, k, Mat([[1, 0]], 1, 2))
    with pytest.raises(ValidationError):
        RingHom(A, k, Mat([[1, 1]], 1, 2))


@pytest.mark.parametrize("A, B, iso", [
    (fq.split_algebra(2), fq.QAlgebra([[[1, 0], [0, 1]], [[0, 1], [1, 0]]], [1, 0]), True),  # Q[e]/(e^2 - 1)
    (fq.split_algebra(2), fq.dual_numbers(), False),
    (fq.truncated_polynomial(3), fq.product_algebra([fq.dual_numbers(), fq.field()]), False),
    (fq.truncated_polynomial(2), fq.dual_numbers(), True),
])
def test_ring_iso_search(A, B, iso):
    v = coeff.ring_iso_search(A, B)
    assert bool(v) is iso
    if iso:
        h = v.witness
        assert QB.is_ring_iso(h)


@pytest.mark.parametrize("A, B, mat, flat", [
    (fq.split_algebra(2), fq.field(), [[1, 0]], True),  # localization of Q x Q
    (fq.dual_numbers(), fq.field(), [[1, 0]], False),  # residue field of Q[e]/e^2
    (fq.field(), fq.dual_numbers(), [[1], [0]], True),
    (fq.truncated_polynomial(3), fq.dual_numbers(), [[1, 0, 0], [0, 1, 0]], False),
])
def test_flatness(A, B, mat, flat):
    h = RingHom(A, B, Mat(mat, len(mat), len(mat[0])))
    assert bool(coeff.is_flat(h)) is flat


def test_base_change_along_quotient():
    A = fq.truncated_polynomial(3)
    B, proj = fq.quotient_algebra(A, fq.ideal_generated(A, [[0, 0, 1]]))
    assert B.dim == 2
    M = fq.free_module(A, 2)
    assert QB.base_change(M, proj).dim == 4
    unit = QB.unit(M, proj)
    assert QB.is_surjective(unit)


def test_module_presentation_dimension():
    A = fq.truncated_polynomial(3)
    M = fq.module_from_presentation(A, 1, [[[0, 1, 0]]])  # A / (t)
    assert M.dim == 1
    assert bool(coeff.mod_iso_search(M, fq.quotient_ring_module(A, fq.ideal_generated(A, [[0, 1, 0]]))))


def test_tensor_rings_dimension():
    k = fq.field()
    A, B = fq.dual_numbers(), fq.split_algebra(2)
    T, i1, i2 = QB.tensor_rings(A, B, k, RingHom(k, A, Mat([[1], [0]], 2, 1)), RingHom(k, B, Mat([[1], [1]], 2, 1)))
    assert T.dim == 4


# GradedMonomial ------------------------------------------------------------------

@pytest.mark.parametrize("signs, deg, inside", [
    ("+", (3,), True), ("+", (-1,), False), ("-", (-2,), True), ("*", (-5,), True),
    ("0", (0,), True), ("0", (1,), False), ("+*", (0, -4), True), ("+*", (-1, 0), False),
])
def test_monomial_ring_membership(signs, deg, inside):
    assert gr.MonomialRing(signs).contains(deg) is inside


@pytest.mark.parametrize("a, b, meet", [("+", "-", "0"), ("+", "*", "+"), ("*", "*", "*"), ("-", "0", "0")])
def test_sign_meet(a, b, meet):
    assert gr.sign_meet(a, b) == meet


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_graded_inclusion_iso_failures_are_monomials_outside(n, d):
    """k[t](n) -> k[t,1/t](n) fails to be onto exactly in degrees < n."""
    R, L = gr.MonomialRing("+"), gr.MonomialRing("*")
    h = GB.inclusion(R, L)
    f = ModMap(gr.twisted(R, (n,)), GB.restrict(gr.twisted(L, (n,)), h), Mat([[1]], 1, 1), True)
    w = DegreeWindow(-4, 4)
    bad = GB.iso_failures(f, w)
    assert [a for (a,) in bad] == sorted([a for a in range(-4, 4 + 1) if a < n], key=lambda a: (abs(a), a))[: len(bad)]
    assert len(bad) == len([a for a in range(-4, 5) if a < n])


def test_graded_requires_window():
    from finitespaces.errors import WindowRequired

    R = gr.MonomialRing("*")
    M = gr.twisted(R, (0,))
    f = GB.identity(M)
    with pytest.raises(WindowRequired):
        GB.kernel(GB.add(f, GB.scale(f, -1)))


def test_backend_mismatch():
    with pytest.raises(BackendMismatch):
        RingHom(coeff.ZZ, fq.field())
    with pytest.raises(BackendMismatch):
        coeff.backend_by_name("Reals")
