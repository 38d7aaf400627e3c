"""Dimension tables, dependence and d-closure, pregeometry isomorphism, and the
two isomorphism-extension constructions between the R- and S-calculi."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .core import RStructure, SStructure, Structure, key
from .errors import NoDistinctPairs, PreconditionError, SearchTooLarge
from .strength import DEFAULT_BOUND, is_strong

PG_BOUND = 16


@dataclass(frozen=True, eq=False)
class PregeometryTable:
    """dim of every subset of ``universe``; bit i of an index is the i-th sorted point."""
    universe: tuple[str, ...]
    dims: np.ndarray

    @property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.universe)}

    def mask(self, pts: Iterable[str]) -> int:
        idx = self.index
        m = 0
        for p in pts:
            if p not in idx:
                raise PreconditionError(f"unknown point {p!r}")
            m |= 1 << idx[p]
        return m

    def dim(self, pts: Iterable[str]) -> int:
        return int(self.dims[self.mask(pts)])

    def independent(self, pts: Iterable[str]) -> bool:
        pts = set(pts)
        return self.dim(pts) == len(pts)

    def independent_tuples(self, n: int) -> list[tuple[str, ...]]:
        """I_n as sorted n-sets (the relation is symmetric)."""
        return [c for c in combinations(self.universe, n) if self.independent(c)]

    def rows(self) -> list[tuple[tuple[str, ...], int]]:
        n = len(self.universe)
        out = []
        for r in range(n + 1):
            for c in combinations(range(n), r):
                m = sum(1 << i for i in c)
                out.append((tuple(self.universe[i] for i in c), int(self.dims[m])))
        return out

    def to_tsv(self) -> str:
        return "".join(",".join(s) + "\t" + str(d) + "\n" for s, d in self.rows())

    def __eq__(self, other):
        return (isinstance(other, PregeometryTable) and self.universe == other.universe
                and np.array_equal(self.dims, other.dims))


def parse_table(text: str) -> PregeometryTable:
    entries = {}
    pts: set[str] = set()
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        s, d = line.split("\t")
        subset = tuple(p for p in s.split(",") if p)
        entries[subset] = int(d)
        pts.update(subset)
    universe = tuple(sorted(pts))
    idx = {p: i for i, p in enumerate(universe)}
    dims = np.full(1 << len(universe), -1, dtype=np.int64)
    for subset, d in entries.items():
        dims[sum(1 << idx[p] for p in subset)] = d
    if (dims < 0).any():
        raise PreconditionError("table does not list every subset")
    return PregeometryTable(universe, dims)


def pregeometry_violation(t: PregeometryTable):
    return kernels.pregeometry_violation(t.dims, len(t.universe))


def pg_table(n: Structure, bound: int = PG_BOUND) -> PregeometryTable:
    k = len(n.points)
    if k > bound:
        raise SearchTooLarge(k, bound)
    masks, weights = n.items
    dims = kernels.superset_min(kernels.predim_table(k, masks, weights), k)
    if k and int(dims[0]) < 0:
        raise PreconditionError("the structure is not in the age: some subset has negative predimension")
    t = PregeometryTable(n.order, np.asarray(dims, dtype=np.int64))
    bad = pregeometry_violation(t)
    if bad is not None:
        raise AssertionError(f"dimension table violates the {bad[0]} axiom")
    return t


def dependent(a: str, x: Iterable[str], n: Structure | PregeometryTable) -> bool:
    t = n if isinstance(n, PregeometryTable) else pg_table(n)
    x = set(x)
    return t.dim(x | {a}) == t.dim(x)


@dataclass(frozen=True)
class DClosureRecord:
    seed: frozenset
    closure: frozenset


def d_closure(x: Iterable[str], n: Structure | PregeometryTable) -> DClosureRecord:
    t = n if isinstance(n, PregeometryTable) else pg_table(n)
    seed = frozenset(x)
    cur = set(seed)
    changed = True
    while changed:
        changed = False
        for a in t.universe:
            if a not in cur and dependent(a, cur, t):
                cur.add(a)
                changed = True
    return DClosureRecord(seed, frozenset(cur))


def _signature(t: PregeometryTable, p: str):
    others = [q for q in t.universe if q != p]
    return (t.dim([p]), tuple(sorted(t.dim([p, q]) for q in others)))


def pg_isomorphic(p1: PregeometryTable, p2: PregeometryTable,
                  fixed: Mapping[str, str] | None = None) -> dict | None:
    """A bijection carrying dims of p1 onto dims of p2, or None."""
    if len(p1.universe) != len(p2.universe):
        return None
    if sorted(p1.dims.tolist()) != sorted(p2.dims.tolist()):
        return None
    s1 = {p: _signature(p1, p) for p in p1.universe}
    s2 = {q: _signature(p2, q) for q in p2.universe}
    if Counter(s1.values()) != Counter(s2.values()):
        return None
    fixed = dict(fixed or {})
    order = sorted(p1.universe, key=lambda p: (p not in fixed, sum(1 for q in s2.values() if q == s1[p]), p))
    i1, i2 = p1.index, p2.index
    f: dict[str, str] = {}
    used: set[str] = set()
    # assigned[k] = list of (mask1, mask2) for subsets of the first k points
    subsets = [(0, 0)]

    def go(k: int, subsets):
        if k == len(order):
            return dict(f)
        p = order[k]
        cands = [fixed[p]] if p in fixed else [q for q in p2.universe if s2[q] == s1[p]]
        for q in cands:
            if q in used:
                continue
            b1, b2 = 1 << i1[p], 1 << i2[q]
            new = [(m1 | b1, m2 | b2) for m1, m2 in subsets]
            if all(p1.dims[m1] == p2.dims[m2] for m1, m2 in new):
                f[p] = q
                used.add(q)
                out = go(k + 1, subsets + new)
                if out is not None:
                    return out
                del f[p]
                used.discard(q)
        return None

    return go(0, subsets)


def tables_agree(t1: PregeometryTable, t2: PregeometryTable, f: Mapping[str, str]) -> tuple | None:
    """First subset X of t1 with dim(X) != dim(f[X]) in t2, or None."""
    if set(f) != set(t1.universe):
        raise PreconditionError("the map must be total on the first table")
    i2 = t2.index
    n = len(t1.universe)
    img = [1 << i2[f[p]] for p in t1.universe]
    for m in range(1 << n):
        m2 = 0
        for i in range(n):
            if m >> i & 1:
                m2 |= img[i]
        if int(t1.dims[m]) != int(t2.dims[m2]):
            return tuple(t1.universe[i] for i in range(n) if m >> i & 1), int(t1.dims[m]), int(t2.dims[m2])
    return None


def geometry(t: PregeometryTable) -> PregeometryTable:
    """Drop dimension-0 points, identify points spanning dimension 1; classes are
    represented by their least point."""
    reps: list[str] = []
    for p in t.universe:
        if t.dim([p]) == 0:
            continue
        if not any(t.dim([p, r]) <= 1 for r in reps):
            reps.append(p)
    cls = {r: [p for p in t.universe if t.dim([p]) and t.dim([p, r]) <= 1] for r in reps}
    n = len(reps)
    dims = np.zeros(1 << n, dtype=np.int64)
    for m in range(1 << n):
        pts = [q for i, r in enumerate(reps) if m >> i & 1 for q in cls[r]]
        dims[m] = t.dim(pts)
    return PregeometryTable(tuple(reps), dims)


def dimensionleq_holds(c: Structure, cbar: Structure, d: Structure, dbar: Structure,
                       f: Mapping[str, str], x: Iterable[str]) -> bool | None:
    """Hypothesis d0(X̄/X̄∩C) >= d0(f[X̄]/f[X̄]∩D) implies d(X) >= d(f[X]);
    None when the hypothesis fails on this X."""
    tc, td = pg_table(cbar), pg_table(dbar)
    xbar = d_closure(x, tc).closure
    fx = frozenset(f[p] for p in x)
    fxbar = frozenset(f[p] for p in xbar)
    lhs = cbar.predim_of(xbar) - cbar.predim_of(xbar & c.points)
    rhs = dbar.predim_of(fxbar) - dbar.predim_of(fxbar & d.points)
    if lhs < rhs:
        return None
    return tc.dim(x) >= td.dim(fx)


# isomorphism extension, R side to S side

def _fresh(prefix: str, p: str, taken: set[str]) -> str:
    name = f"{prefix}{p}"
    i = 1
    while name in taken:
        name = f"{prefix}{p}_{i}"
        i += 1
    taken.add(name)
    return name


def _check_pg_iso(x: Structure, y: Structure, f0: Mapping[str, str]):
    if set(f0) != set(x.points) or set(f0.values()) != set(y.points) or len(set(f0.values())) != len(f0):
        raise PreconditionError("f0 must be a bijection between the two bases")
    bad = tables_agree(pg_table(x), pg_table(y), f0)
    if bad is not None:
        raise PreconditionError(f"f0 is not a pregeometry isomorphism: dim {key(bad[0])} is {bad[1]} "
                                f"but its image has {bad[2]}")


def extend_iso_c_to_cs(a: RStructure, d: SStructure, f0: Mapping[str, str],
                       b: RStructure, bound: int = DEFAULT_BOUND) -> tuple[SStructure, dict]:
    """E = D plus a point e_b per new point of B, with one 3-clique per 3-set
    carrying new relations of B (premult = their number)."""
    f0 = dict(f0)
    _check_pg_iso(a, d, f0)
    if not a.points <= b.points or b.relations_within(a.points) != a.relations or a.mode != b.mode:
        raise PreconditionError("A is not a substructure of B")
    if not is_strong(a.points, b, bound).strong:
        raise PreconditionError("A is not strong in B")
    taken = set(d.points)
    f = dict(f0)
    for p in sorted(b.points - a.points):
        f[p] = _fresh("e_", p, taken)
    cl = Counter()
    for r in b.relations - a.relations:
        cl[frozenset(f[p] for p in r)] += 1
    e = SStructure(set(f.values()), dict(d.premult) | dict(cl))
    return e, f


def distinct_pairs(e: SStructure, allowed: Mapping[tuple[frozenset, int], frozenset] | None = None,
                   ) -> dict[tuple[frozenset, int], tuple[str, str]]:
    """An injective choice of a 2-subset inside each clique instance.

    Instances are (universe, i) for i < premult; ``allowed`` optionally shrinks
    the set a pair is drawn from.  Found by augmenting-path matching.
    """
    instances = []
    for u, m in e.cliques:
        for i in range(m):
            instances.append((u, i))
    pools = {}
    for inst in instances:
        s = frozenset(allowed.get(inst, inst[0])) if allowed else inst[0]
        if not s <= inst[0] or len(s) < 2:
            raise PreconditionError(f"allowed set for {key(inst[0])} must be a 2+ subset of it")
        pools[inst] = [tuple(p) for p in combinations(key(s), 2)]
    owner: dict[tuple, tuple] = {}
    chosen: dict[tuple, tuple] = {}

    def augment(inst, seen: set) -> bool:
        for pair in pools[inst]:
            if pair in seen:
                continue
            seen.add(pair)
            other = owner.get(pair)
            if other is None or augment(other, seen):
                owner[pair] = inst
                chosen[inst] = pair
                return True
        return False

    for inst in instances:
        seen: set = set()
        if not augment(inst, seen):
            # alternating tree: every pair reachable is owned by a reached instance
            reached = {inst} | {owner[p] for p in seen}
            x = frozenset().union(*(frozenset(q for pair in pools[r] for q in pair) for r in reached))
            value = e.restrict(x, check=False).predim_of(x)
            raise NoDistinctPairs(x, value)
    return chosen


def emulation(e: SStructure, d: SStructure, a: RStructure, f0: Mapping[str, str],
              bound: int = DEFAULT_BOUND) -> tuple[RStructure, dict]:
    """R-structure on A plus a point b_e per new point of E; each clique instance
    is routed through its chosen pair (x_C, y_C)."""
    f0 = dict(f0)
    _check_pg_iso(d, a, f0)
    if not d.points <= e.points or e.restrict(d.points, check=False) != d:
        raise PreconditionError("D is not a substructure of E")
    if not is_strong(d.points, e, bound).strong:
        raise PreconditionError("D is not strong in E")
    allowed = {}
    for u, m in e.cliques:
        if len(u & d.points) >= 3:
            for i in range(m):
                allowed[(u, i)] = u & d.points
    pairs = distinct_pairs(e, allowed)
    taken = set(a.points)
    f = dict(f0)
    for p in sorted(e.points - d.points):
        f[p] = _fresh("b_", p, taken)
    rels = set(a.relations)
    for (u, i), (x, y) in sorted(pairs.items(), key=lambda kv: (key(kv[0][0]), kv[0][1])):
        inner = u & d.points
        first = u - d.points if len(inner) >= 3 else u - {x, y}
        for c in first:
            rels.add((f[c], f[x], f[y]))
    return RStructure(set(f.values()), rels, a.mode), f
