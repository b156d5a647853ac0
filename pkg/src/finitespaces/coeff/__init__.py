"""Exact coefficient kernel with three backends sharing one protocol.

``ZConst``          every ring is Z; modules are finitely presented abelian groups.
``FinDimQ``         finite-dimensional commutative Q-algebras given by structure constants.
``GradedMonomial``  monomial rings k[P] on a lattice Z^m, computed degreewise on a window.

The functions below dispatch on the backend of their first argument.
"""
from __future__ import annotations

from typing import Sequence, Tuple

from ..errors import BackendMismatch
from ..verdict import Verdict
from .base import BACKENDS, FINDIMQ, GRADED, ZCONST, DegreeWindow, ModMap, RingHom, as_window, same_backend
from .findimq import QAlgebra, QB, QModule
from .graded import GB, GModule, GWin, MonomialRing
from .intmat import smith_normal_form
from .matrix import Mat
from .zconst import ZB, ZZ, ZModule

BY_NAME = {ZCONST: ZB, FINDIMQ: QB, GRADED: GB}


def backend_by_name(name: str):
    try:
        return BY_NAME[name]
    except KeyError:
        raise BackendMismatch(f"unknown backend {name!r}; expected one of {', '.join(BACKENDS)}") from None


def base_change(M, h: RingHom):
    if M.ring != h.source:
        raise BackendMismatch("module ring differs from the source of the ring map")
    return same_backend(M, h).base_change(M, h)


def kernel(f: ModMap, window=None):
    return f.backend.kernel(f, as_window(window))


def cokernel(f: ModMap, window=None):
    return f.backend.cokernel(f, as_window(window))


def image(f: ModMap, window=None):
    return f.backend.image(f, as_window(window))


def finite_limit(nodes: Sequence, arrows: Sequence[Tuple[int, int, ModMap]], window=None):
    """Limit of a finite diagram of modules over one ring: the kernel of
    prod_i N_i -> prod_arrows N_target, x -> f(x_source) - x_target.
    Returns (L, [projection L -> N_i])."""
    nodes = list(nodes)
    if not nodes:
        raise ValueError("empty diagram")
    B = same_backend(*nodes)
    ring = nodes[0].ring
    for N in nodes:
        if N.ring != ring:
            raise BackendMismatch("diagram mixes modules over different rings")
    P, incs, projs = B.direct_sum(nodes, ring)
    tgts = [nodes[j] for _, j, _ in arrows]
    T, _, _ = B.direct_sum(tgts, ring)
    blocks = {}
    for k, (i, j, f) in enumerate(arrows):
        blocks[(k, i)] = f if (k, i) not in blocks else blocks[(k, i)] + f
        blocks[(k, j)] = -B.identity(nodes[j]) if (k, j) not in blocks else blocks[(k, j)] - B.identity(nodes[j])
    D = B.assemble(P, nodes, T, tgts, blocks)
    if not arrows:
        if window is not None and B is GB:
            K, inc = B.kernel(D, as_window(window))
            return K, [p @ inc for p in projs]
        return P, projs
    K, inc = B.kernel(D, as_window(window))
    return K, [p @ inc for p in projs]


def tensor_rings(R1, R2, R0, h1: RingHom, h2: RingHom):
    return same_backend(R1, R2, R0).tensor_rings(R1, R2, R0, h1, h2)


def is_iso(f: ModMap, window=None) -> bool:
    return f.backend.is_iso(f, as_window(window))


def mod_iso_search(M, N, budget=None) -> Verdict:
    B = same_backend(M, N)
    return B.mod_iso_search(M, N) if budget is None else B.mod_iso_search(M, N, budget)


def is_flat(h: RingHom) -> Verdict:
    return h.backend.is_flat(h)


def ring_iso_search(A, B, budget=None) -> Verdict:
    be = same_backend(A, B)
    return be.ring_iso_search(A, B) if budget is None else be.ring_iso_search(A, B, budget)


def snf(A):
    """(invariant factors, U, V) with U A V diagonal (d_1 | d_2 | ...)."""
    if not isinstance(A, Mat):
        A = Mat(A)
    s = smith_normal_form(A)
    return s.invariant_factors, s.U, s.V


def iso_failure(f: ModMap, window=None):
    """None if f is an isomorphism, else a witness: the smallest failing
    degree on the graded backend, or a description of kernel/cokernel."""
    B = f.backend
    w = as_window(window)
    if B is GB:
        bad = B.iso_failures(f, w)
        return bad[0] if bad else None
    if B.is_iso(f):
        return None
    K, _ = B.kernel(f)
    C, _ = B.cokernel(f)
    return {"kernel": B.describe(K), "cokernel": B.describe(C)}


def nonzero_witness(M, window=None):
    """None if M is zero, else the smallest nonzero degree (graded) or a
    description of M."""
    B = M.backend
    if B is GB and isinstance(M, GWin) or (B is GB and window is not None):
        nz = B.zero_degrees(M, as_window(window))
        return nz[0] if nz else None
    return None if B.is_zero(M) else B.describe(M)


__all__ = [
    "BACKENDS", "ZCONST", "FINDIMQ", "GRADED", "DegreeWindow", "ModMap", "RingHom", "Mat",
    "ZB", "ZZ", "ZModule", "QB", "QAlgebra", "QModule", "GB", "MonomialRing", "GModule", "GWin",
    "backend_by_name", "base_change", "kernel", "cokernel", "image", "finite_limit", "tensor_rings",
    "is_iso", "mod_iso_search", "is_flat", "ring_iso_search", "snf", "iso_failure", "nonzero_witness",
]
