"""Brute-force reference implementations, written from the definitions only.

Nothing here imports the package's kernels or search code; structures are
taken apart into plain sets and everything is recomputed by enumeration.
"""
from __future__ import annotations

from itertools import chain, combinations, permutations


def powerset(pts):
    pts = sorted(pts)
    return [frozenset(c) for c in chain.from_iterable(combinations(pts, r) for r in range(len(pts) + 1))]


def supersets(a, pts):
    a = frozenset(a)
    rest = sorted(set(pts) - a)
    return [a | s for s in powerset(rest)]


# predimension on a subset

def r_predim(points, relations, x=None) -> int:
    x = frozenset(points if x is None else x)
    return len(x) - sum(1 for r in relations if set(r) <= x)


def s_mult_on(cliques, x):
    """Premultiplicities of the structure induced on x (additivity)."""
    out = {}
    for u, m in cliques:
        c = frozenset(u) & x
        if len(c) >= 3:
            out[c] = out.get(c, 0) + m
    return out


def s_predim(points, cliques, x=None) -> int:
    x = frozenset(points if x is None else x)
    return len(x) - sum(m * (len(c) - 2) for c, m in s_mult_on(cliques, x).items())


def predim_fn(structure):
    """x -> predimension of the induced substructure, from the raw data."""
    if hasattr(structure, "relations"):
        rels = list(structure.relations)
        return lambda x: r_predim(structure.points, rels, x)
    cl = list(structure.cliques)
    return lambda x: s_predim(structure.points, cl, x)


def dim(a, structure) -> int:
    d0 = predim_fn(structure)
    return min(d0(y) for y in supersets(a, structure.points))


def strong(a, structure) -> bool:
    return predim_fn(structure)(frozenset(a)) == dim(a, structure)


def closure(a, structure) -> frozenset:
    """Intersection of every strong superset."""
    out = frozenset(structure.points)
    for y in supersets(a, structure.points):
        if strong(y, structure):
            out &= y
    return out


def in_age(structure) -> bool:
    d0 = predim_fn(structure)
    return all(d0(x) >= 0 for x in powerset(structure.points))


def lex_key(s, order):
    """Subsets compared as sorted index tuples."""
    return tuple(sorted(order.index(p) for p in s))


# validity of clique data

CAPS = {3: 3, 4: 2}


def s_valid(points, cliques) -> bool:
    for c in powerset(points):
        if len(c) < 3:
            continue
        m = sum(k for u, k in cliques if c <= frozenset(u))
        if m > CAPS.get(len(c), 1):
            return False
    return True


# cliques in R-structures

def cliques(a, structure):
    """(universe, pair) for each pair whose common relation points inside a number at least 3."""
    rels = [frozenset(r) for r in structure.relations]
    out = []
    for x, y in combinations(sorted(structure.points), 2):
        u = frozenset(c for c in a if c not in (x, y) and frozenset((c, x, y)) in rels)
        if len(u) >= 3:
            out.append((u, frozenset((x, y))))
    return sorted(out, key=lambda t: (sorted(t[0]), sorted(t[1])))


def multiplicity(c, structure) -> int:
    c = frozenset(c)
    if len(c) < 3:
        return 0
    rels = {frozenset(r) for r in structure.relations}
    return sum(1 for x, y in combinations(sorted(structure.points - c), 2)
               if all(frozenset((p, x, y)) in rels for p in c))


# isomorphism counting for the exhaustive tiers (Burnside over the symmetric group)

def _labeled_r(n, ordered):
    slots = ([p for c in combinations(range(n), 3) for p in permutations(c)] if ordered
             else list(combinations(range(n), 3)))
    for k in range(min(len(slots), n) + 1):  # more relations than points is never in the age
        for rels in combinations(slots, k):
            yield frozenset(rels)


def _act_r(g, rels, ordered):
    if ordered:
        return frozenset(tuple(g[i] for i in r) for r in rels)
    return frozenset(tuple(sorted(g[i] for i in r)) for r in rels)


def count_r_types(n, ordered=False) -> int:
    """Isomorphism types of R-structures on exactly n points with the empty set strong."""
    pts = [str(i) for i in range(n)]
    members = []
    for rels in _labeled_r(n, ordered):
        named = [tuple(pts[i] for i in r) for r in rels]
        if all(r_predim(pts, named, x) >= 0 for x in powerset(pts)):
            members.append(rels)
    fixed = 0
    for g in permutations(range(n)):
        fixed += sum(1 for rels in members if _act_r(g, rels, ordered) == rels)
    return fixed // len(list(permutations(range(n))))


def count_s_types(n) -> int:
    from itertools import product

    pts = [str(i) for i in range(n)]
    universes = [frozenset(c) for r in range(3, n + 1) for c in combinations(pts, r)]
    members = []
    for ms in product(range(4), repeat=len(universes)):
        cl = [(u, m) for u, m in zip(universes, ms) if m]
        if not s_valid(pts, cl):
            continue
        if all(s_predim(pts, cl, x) >= 0 for x in powerset(pts)):
            members.append(frozenset(cl))
    perms = list(permutations(range(n)))
    fixed = 0
    for g in perms:
        ren = {pts[i]: pts[g[i]] for i in range(n)}
        for cl in members:
            img = frozenset((frozenset(ren[p] for p in u), m) for u, m in cl)
            fixed += img == cl
    return fixed // len(perms)


# distinct pairs, by exhaustive assignment

def distinct_pairs_exist(instances) -> bool:
    """instances: list of point sets; is there an injective choice of a 2-subset in each?"""
    pools = [[frozenset(p) for p in combinations(sorted(u), 2)] for u in instances]

    def go(i, used):
        if i == len(pools):
            return True
        return any(go(i + 1, used | {p}) for p in pools[i] if p not in used)

    return go(0, frozenset())


# isomorphism by trying every bijection

def _edge_set(x):
    if hasattr(x, "relations"):
        if getattr(x, "mode", "symmetric") == "ordered":
            return {(tuple(r), 1) for r in x.relations}
        return {(frozenset(r), 1) for r in x.relations}
    return {(frozenset(u), m) for u, m in x.cliques}


def isomorphic(x, y) -> bool:
    px, py = sorted(x.points), sorted(y.points)
    if len(px) != len(py):
        return False
    ex, ey = _edge_set(x), _edge_set(y)
    if len(ex) != len(ey):
        return False
    for img in permutations(py):
        f = dict(zip(px, img))
        mapped = set()
        for e, m in ex:
            mapped.add(((tuple(f[p] for p in e) if isinstance(e, tuple) else frozenset(f[p] for p in e)), m))
        if mapped == ey:
            return True
    return False
