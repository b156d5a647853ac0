"""Finite preorders and posets.

Convention: p <= q iff q lies in the minimal open set U_p, so
U_p = {q : p <= q} (upward closed) and closure(p) = {q : q <= p}.

Point ids are opaque hashable values (strings for user input, tuples for
products). Every enumeration is sorted by ``point_key`` so that results are
reproducible.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from .errors import DuplicatePointError, SearchBudgetExceeded, UnknownPointError, ValidationError

Point = Hashable


def point_key(p):
    """Sort key that orders strings and nested tuples of strings consistently."""
    if isinstance(p, tuple):
        return (1, tuple(point_key(x) for x in p))
    return (0, str(p))


def sort_points(points):
    return sorted(points, key=point_key)


class Preorder:
    """A finite set with a reflexive and transitive relation, stored as a dense
    boolean matrix indexed by position in ``points``."""

    __slots__ = ("points", "index", "_leq", "_up", "_down", "_cache")

    def __init__(self, points: Sequence[Point], leq: Sequence[Sequence[bool]]):
        self.points = tuple(points)
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise DuplicatePointError("duplicate point id")
        n = len(self.points)
        self._leq = tuple(tuple(bool(x) for x in row) for row in leq)
        if len(self._leq) != n or any(len(r) != n for r in self._leq):
            raise ValidationError("relation matrix has wrong shape")
        for i in range(n):
            if not self._leq[i][i]:
                raise ValidationError(f"relation not reflexive at {self.points[i]!r}")
        for i in range(n):
            for j in range(n):
                if self._leq[i][j]:
                    for k in range(n):
                        if self._leq[j][k] and not self._leq[i][k]:
                            raise ValidationError("relation not transitive")
        self._up = tuple(frozenset(self.points[j] for j in range(n) if self._leq[i][j]) for i in range(n))
        self._down = tuple(frozenset(self.points[j] for j in range(n) if self._leq[j][i]) for i in range(n))
        self._cache = {}

    # basic queries -------------------------------------------------------
    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return p in self.index

    def __repr__(self):
        rel = [(p, q) for p, q in self.covers()]
        return f"Preorder(points={list(self.sorted_points())!r}, covers={rel!r})"

    def __eq__(self, other):
        if not isinstance(other, Preorder):
            return NotImplemented
        if set(self.points) != set(other.points):
            return False
        return all(self.leq(p, q) == other.leq(p, q) for p in self.points for q in self.points)

    def __hash__(self):
        return hash(frozenset(self.relation_pairs()))

    def _idx(self, p):
        try:
            return self.index[p]
        except KeyError:
            raise UnknownPointError(f"unknown point {p!r}") from None

    def leq(self, p, q) -> bool:
        return self._leq[self._idx(p)][self._idx(q)]

    def lt(self, p, q) -> bool:
        """Strict order: p <= q and not q <= p."""
        i, j = self._idx(p), self._idx(q)
        return self._leq[i][j] and not self._leq[j][i]

    def equivalent(self, p, q) -> bool:
        i, j = self._idx(p), self._idx(q)
        return self._leq[i][j] and self._leq[j][i]

    def sorted_points(self):
        if "sorted" not in self._cache:
            self._cache["sorted"] = tuple(sort_points(self.points))
        return self._cache["sorted"]

    def min_open(self, p) -> FrozenSet:
        return self._up[self._idx(p)]

    def closure(self, p) -> FrozenSet:
        return self._down[self._idx(p)]

    def relation_pairs(self):
        return [(p, q) for p in self.points for q in self.points if self.leq(p, q)]

    def is_poset(self) -> bool:
        n = len(self.points)
        return all(not (self._leq[i][j] and self._leq[j][i]) for i in range(n) for j in range(n) if i != j)

    def is_open(self, subset) -> bool:
        s = set(subset)
        return all(self.min_open(p) <= s for p in s)

    def is_closed(self, subset) -> bool:
        s = set(subset)
        return all(self.closure(p) <= s for p in s)

    def open_hull(self, subset) -> FrozenSet:
        out = set()
        for p in subset:
            out |= self.min_open(p)
        return frozenset(out)

    def covers(self) -> List[Tuple[Point, Point]]:
        """Generating relations used to store restriction data.

        For a poset these are the Hasse edges. For a preorder: every ordered pair
        inside an equivalence class, plus all pairs (p, q) whose classes are
        adjacent in the quotient order.
        """
        if "covers" in self._cache:
            return self._cache["covers"]
        out = []
        pts = self.sorted_points()
        for p in pts:
            for q in pts:
                if p == q or not self.leq(p, q):
                    continue
                if self.equivalent(p, q):
                    out.append((p, q))
                    continue
                between = any(self.lt(p, r) and self.lt(r, q) for r in pts)
                if not between:
                    out.append((p, q))
        self._cache["covers"] = out
        return out

    def upper_covers(self, p):
        return [q for (a, q) in self.covers() if a == p]

    def lower_covers(self, q):
        return [a for (a, b) in self.covers() if b == q]

    # subsets -------------------------------------------------------------
    def subspace(self, subset) -> "Preorder":
        """Induced preorder on a subset (kept in this preorder's point order)."""
        s = set(subset)
        for p in s:
            self._idx(p)
        pts = [p for p in self.points if p in s]
        return Preorder(pts, [[self.leq(p, q) for q in pts] for p in pts])

    def maximum(self, subset=None):
        """A point m of ``subset`` with x <= m for every x in it, or None.
        Among equivalent candidates the smallest id is returned."""
        s = list(self.points if subset is None else subset)
        cands = [m for m in sort_points(s) if all(self.leq(x, m) for x in s)]
        return cands[0] if cands else None

    def minimum(self, subset=None):
        s = list(self.points if subset is None else subset)
        cands = [m for m in sort_points(s) if all(self.leq(m, x) for x in s)]
        return cands[0] if cands else None

    def maximal_points(self, subset=None):
        s = list(self.points if subset is None else subset)
        return [m for m in sort_points(s) if not any(self.lt(m, x) for x in s)]

    def minimal_points(self, subset=None):
        s = list(self.points if subset is None else subset)
        return [m for m in sort_points(s) if not any(self.lt(x, m) for x in s)]

    # chains and dimension --------------------------------------------------
    def chains(self, n: int, subset=None) -> List[Tuple[Point, ...]]:
        """Strictly increasing (n+1)-tuples x0 < ... < xn inside ``subset``,
        in lexicographic order of point ids."""
        if n < 0:
            return []
        pts = self.sorted_points() if subset is None else tuple(sort_points(subset))
        key = ("chains", n, frozenset(pts))
        if key in self._cache:
            return self._cache[key]
        out: List[Tuple[Point, ...]] = []

        def extend(prefix):
            if len(prefix) == n + 1:
                out.append(tuple(prefix))
                return
            for q in pts:
                if not prefix or self.lt(prefix[-1], q):
                    prefix.append(q)
                    extend(prefix)
                    prefix.pop()

        extend([])
        self._cache[key] = out
        return out

    def dimension(self, subset=None) -> int:
        """Length n of the longest chain x0 < ... < xn (-1 for the empty set)."""
        pts = self.sorted_points() if subset is None else tuple(sort_points(subset))
        if not pts:
            return -1
        best = {}
        # longest chain ending at p
        order = sorted(pts, key=lambda p: len(self.closure(p)))
        for p in order:
            best[p] = max([best[q] + 1 for q in pts if q in best and self.lt(q, p)], default=0)
        return max(best.values())

    # connectivity ------------------------------------------------------
    def components(self, subset=None) -> List[FrozenSet]:
        """Connected components of the subspace ``subset`` (comparability graph),
        sorted by their smallest point."""
        pts = list(self.sorted_points() if subset is None else sort_points(subset))
        seen = set()
        comps = []
        for p in pts:
            if p in seen:
                continue
            comp = {p}
            stack = [p]
            while stack:
                a = stack.pop()
                for b in pts:
                    if b not in comp and (self.leq(a, b) or self.leq(b, a)):
                        comp.add(b)
                        stack.append(b)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self, subset=None) -> bool:
        return len(self.components(subset)) == 1


def build_preorder(points: Iterable[Point], generating_relations: Iterable[Tuple[Point, Point]] = ()) -> Preorder:
    """Reflexive-transitive closure of the given relations a <= b."""
    pts = list(points)
    seen = set()
    for p in pts:
        if p in seen:
            raise DuplicatePointError(f"duplicate point id {p!r}")
        seen.add(p)
    idx = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    m = [[i == j for j in range(n)] for i in range(n)]
    for a, b in generating_relations:
        if a not in idx:
            raise UnknownPointError(f"relation mentions unknown point {a!r}")
        if b not in idx:
            raise UnknownPointError(f"relation mentions unknown point {b!r}")
        m[idx[a]][idx[b]] = True
    for k in range(n):
        mk = m[k]
        for i in range(n):
            if m[i][k]:
                mi = m[i]
                for j in range(n):
                    if mk[j]:
                        mi[j] = True
    return Preorder(pts, m)


def chain_poset(n: int, prefix="c") -> Preorder:
    """Chain c0 < c1 < ... < cn (n+1 points)."""
    pts = [f"{prefix}{i}" for i in range(n + 1)]
    return build_preorder(pts, list(zip(pts, pts[1:])))


def antichain(n: int, prefix="a") -> Preorder:
    return build_preorder([f"{prefix}{i}" for i in range(n)], [])


# monotone maps ---------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    source: Preorder
    target: Preorder
    mapping: Tuple[Tuple[Point, Point], ...]

    @staticmethod
    def make(source, target, mapping: Dict) -> "MonotoneMap":
        for p in source.points:
            if p not in mapping:
                raise ValidationError(f"point map undefined at {p!r}")
            if mapping[p] not in target:
                raise UnknownPointError(f"point map sends {p!r} to unknown point {mapping[p]!r}")
        for p, q in source.relation_pairs():
            if not target.leq(mapping[p], mapping[q]):
                raise ValidationError(f"point map not monotone: {p!r} <= {q!r} but images are not related")
        return MonotoneMap(source, target, tuple((p, mapping[p]) for p in source.points))

    def __call__(self, p):
        return dict(self.mapping)[p]

    def as_dict(self):
        return dict(self.mapping)

    def preimage(self, subset):
        s = set(subset)
        return frozenset(p for p, fp in self.mapping if fp in s)


def is_monotone(source: Preorder, target: Preorder, mapping: Dict) -> bool:
    return all(target.leq(mapping[p], mapping[q]) for p, q in source.relation_pairs())


def monotone_maps(source: Preorder, target: Preorder):
    """Enumerate every monotone map source -> target (as dicts), in
    lexicographic order of images along the sorted source points."""
    pts = source.sorted_points()
    tpts = target.sorted_points()
    assign = {}

    def rec(k):
        if k == len(pts):
            yield dict(assign)
            return
        p = pts[k]
        for y in tpts:
            ok = True
            for q in pts[:k]:
                if source.leq(q, p) and not target.leq(assign[q], y):
                    ok = False
                    break
                if source.leq(p, q) and not target.leq(y, assign[q]):
                    ok = False
                    break
            if ok:
                assign[p] = y
                yield from rec(k + 1)
                del assign[p]

    yield from rec(0)


# quotients and products ------------------------------------------------------

def t0_quotient(X: Preorder):
    """Quotient by p ~ q iff p <= q <= p.

    Returns (poset, qmap) where each class is named by its smallest member and
    qmap sends every point to its class name.
    """
    qmap = {}
    reps = []
    for p in X.sorted_points():
        if p in qmap:
            continue
        cls = [q for q in X.sorted_points() if X.equivalent(p, q)]
        for q in cls:
            qmap[q] = p
        reps.append(p)
    m = [[X.leq(a, b) for b in reps] for a in reps]
    return Preorder(reps, m), qmap


def product(X: Preorder, Y: Preorder) -> Preorder:
    pts = [(x, y) for x in X.sorted_points() for y in Y.sorted_points()]
    m = [[X.leq(a[0], b[0]) and Y.leq(a[1], b[1]) for b in pts] for a in pts]
    return Preorder(pts, m)


def fibered_product_poset(f: MonotoneMap, g: MonotoneMap) -> Preorder:
    """{(x, y) : f(x) = g(y)} with the componentwise order."""
    if f.target != g.target:
        raise ValidationError("fibered product needs maps into the same codomain")
    fd, gd = f.as_dict(), g.as_dict()
    pts = [(x, y) for x in f.source.sorted_points() for y in g.source.sorted_points() if fd[x] == gd[y]]
    X, Y = f.source, g.source
    m = [[X.leq(a[0], b[0]) and Y.leq(a[1], b[1]) for b in pts] for a in pts]
    return Preorder(pts, m)


# isomorphism search --------------------------------------------------------------

def _point_invariants(X: Preorder, p):
    return (
        len(X.min_open(p)),
        len(X.closure(p)),
        len(X.upper_covers(p)),
        len(X.lower_covers(p)),
        sum(1 for q in X.points if X.equivalent(p, q)),
    )


def iter_poset_isos(X: Preorder, Y: Preorder, budget: int = 200000):
    """Yield order isomorphisms X -> Y (dicts) in lexicographic search order.

    Raises SearchBudgetExceeded after ``budget`` search nodes.
    """
    if len(X) != len(Y):
        return
    xs = X.sorted_points()
    inv_x = {p: _point_invariants(X, p) for p in xs}
    inv_y = {q: _point_invariants(Y, q) for q in Y.sorted_points()}
    if sorted(inv_x.values()) != sorted(inv_y.values()):
        return
    # assign the most constrained points first
    order = sorted(xs, key=lambda p: (sum(1 for q in inv_y if inv_y[q] == inv_x[p]), point_key(p)))
    cands = {p: [q for q in Y.sorted_points() if inv_y[q] == inv_x[p]] for p in xs}
    assign: Dict = {}
    used = set()
    nodes = [0]

    def rec(k):
        if k == len(order):
            yield dict(assign)
            return
        p = order[k]
        for q in cands[p]:
            if q in used:
                continue
            nodes[0] += 1
            if nodes[0] > budget:
                raise SearchBudgetExceeded("poset isomorphism search budget exhausted")
            ok = True
            for a, b in assign.items():
                if X.leq(p, a) != Y.leq(q, b) or X.leq(a, p) != Y.leq(b, q):
                    ok = False
                    break
            if ok:
                assign[p] = q
                used.add(q)
                yield from rec(k + 1)
                del assign[p]
                used.discard(q)

    yield from rec(0)


def poset_iso(X: Preorder, Y: Preorder, budget: int = 200000) -> Optional[Dict]:
    """First isomorphism X -> Y found, or None. Raises SearchBudgetExceeded
    when the search is cut off before a decision."""
    for iso in iter_poset_isos(X, Y, budget):
        return iso
    return None


# enumeration -------------------------------------------------------------------

def posets_up_to_iso(n: int, prefix="p") -> List[Preorder]:
    """Every partial order on n points, one per isomorphism class, on the
    points p0..p{n-1} with p_i <= p_j only for i <= j (a linear extension)."""
    pts = [f"{prefix}{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    found: List[Preorder] = []
    by_inv: Dict = {}
    for mask in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        if any((i, j) in rel and (j, k) in rel and (i, k) not in rel for i, j in rel for k in range(n)):
            continue
        P = Preorder(pts, [[i == j or (i, j) in rel for j in range(n)] for i in range(n)])
        inv = tuple(sorted(_point_invariants(P, p) for p in pts))
        bucket = by_inv.setdefault(inv, [])
        if any(poset_iso(P, Q) is not None for Q in bucket):
            continue
        bucket.append(P)
        found.append(P)
    return found
