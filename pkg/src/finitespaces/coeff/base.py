"""Backend-independent pieces of the coefficient kernel: module maps, degree
windows and the backend protocol every coefficient class implements."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Optional, Tuple

from ..errors import BackendMismatch

ZCONST = "ZConst"
FINDIMQ = "FinDimQ"
GRADED = "GradedMonomial"
BACKENDS = (ZCONST, FINDIMQ, GRADED)


@dataclass(frozen=True)
class DegreeWindow:
    """The box [lo, hi]^m of multidegrees, applied to every lattice coordinate."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty degree window [{self.lo},{self.hi}]")

    def degrees(self, m: int) -> Iterator[Tuple[int, ...]]:
        import itertools

        return itertools.product(range(self.lo, self.hi + 1), repeat=m)

    def contains(self, deg) -> bool:
        return all(self.lo <= a <= self.hi for a in deg)

    def as_tuple(self):
        return (self.lo, self.hi)

    def __str__(self):
        return f"[{self.lo},{self.hi}]"


def as_window(w) -> Optional[DegreeWindow]:
    if w is None or isinstance(w, DegreeWindow):
        return w
    lo, hi = w
    return DegreeWindow(int(lo), int(hi))


class ModMap:
    """A module homomorphism source -> target over one ring.

    Semilinear maps M -> N over h: R -> S are represented as ordinary maps
    M -> restrict_scalars(N, h); the base-change adjunction (``adjoint``)
    turns them into maps M (x)_R S -> N.

    ``mat`` is backend specific: an integer matrix on generators (ZConst), a
    rational matrix on Q-bases (FinDimQ), a scalar matrix on rank-1 summands
    or a dict degree -> matrix (GradedMonomial).
    """

    __slots__ = ("source", "target", "mat")

    def __init__(self, source, target, mat, check: bool = True):
        if source.backend is not target.backend:
            raise BackendMismatch("map between modules of different backends")
        self.source = source
        self.target = target
        self.mat = mat
        if check:
            source.backend.check_map(self)

    @property
    def backend(self):
        return self.source.backend

    def __matmul__(self, other: "ModMap") -> "ModMap":
        return self.backend.compose(self, other)

    def __add__(self, other: "ModMap") -> "ModMap":
        return self.backend.add(self, other)

    def __neg__(self):
        return self.backend.scale(self, -1)

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return f"ModMap({self.source!r} -> {self.target!r})"


@dataclass(frozen=True)
class SubquotientResult:
    """Module together with its structure map (inclusion or projection)."""

    module: Any
    map: ModMap


def same_backend(*objs):
    b = objs[0].backend
    for o in objs[1:]:
        if o.backend is not b:
            raise BackendMismatch("objects come from different coefficient backends")
    return b


class RingHom:
    """Ring homomorphism source -> target; ``data`` is backend specific
    (None for ZConst, a rational matrix for FinDimQ, a lattice matrix for
    GradedMonomial)."""

    __slots__ = ("source", "target", "data")

    def __init__(self, source, target, data=None, check: bool = True):
        if source.backend is not target.backend:
            raise BackendMismatch("ring map between different backends")
        self.source = source
        self.target = target
        self.data = data
        if check:
            source.backend.check_ring_hom(self)

    @property
    def backend(self):
        return self.source.backend

    def __matmul__(self, other: "RingHom") -> "RingHom":
        """Composition self o other."""
        return self.backend.compose_hom(self, other)

    def __eq__(self, other):
        if not isinstance(other, RingHom):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.backend.hom_equal(self, other)
        )

    def __hash__(self):
        return hash((self.source, self.target))

    def __repr__(self):
        return f"RingHom({self.source!r} -> {self.target!r})"
