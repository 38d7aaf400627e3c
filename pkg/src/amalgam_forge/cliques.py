"""Witnessed cliques of symmetric R-structures.

A witness pair {x, y} of N collects every point a of a chosen set A with
{a, x, y} related; when at least three points are collected they form a
maximal clique of A in N, generated by the relations RW(C) = {(c, x, y)}.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .core import SYMMETRIC, RStructure, SStructure, key
from .errors import NoGoodClique, PreconditionError, SearchTooLarge, ValidityError
from .strength import DEFAULT_BOUND, age_certificate


@dataclass(frozen=True)
class WitnessedClique:
    universe: frozenset[str]
    witnesses: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "witnesses", frozenset(self.witnesses))
        if len(self.witnesses) != 2:
            raise ValueError("a clique needs exactly two witnesses")
        if len(self.universe) < 3:
            raise ValueError("a clique needs at least three points")
        if self.universe & self.witnesses:
            raise ValueError("witnesses must lie outside the clique")

    @property
    def sort_key(self):
        return key(self.universe), key(self.witnesses)

    @property
    def generators(self) -> frozenset[tuple[str, str, str]]:
        return generators(self.universe, self.witnesses)

    def tag(self) -> str:
        return ",".join(key(self.universe)) + "|" + ",".join(key(self.witnesses))

    def __str__(self):
        return "{" + ",".join(key(self.universe)) + "} by {" + ",".join(key(self.witnesses)) + "}"


def generators(universe: Iterable[str], pair: Iterable[str]) -> frozenset[tuple[str, str, str]]:
    x, y = pair
    return frozenset(tuple(sorted((c, x, y))) for c in universe)


def canonical(cliques: Iterable[WitnessedClique]) -> list[WitnessedClique]:
    return sorted(cliques, key=lambda c: c.sort_key)


def _symmetric(n: RStructure) -> RStructure:
    if n.mode != SYMMETRIC:
        raise PreconditionError("cliques are defined for symmetric structures")
    return n


def extract_cliques(a: Iterable[str], n: RStructure) -> list[WitnessedClique]:
    a = frozenset(a)
    if not a <= _symmetric(n).points:
        raise PreconditionError(f"points {key(a - n.points)} are not in the structure")
    out = []
    for pair, thirds in n.thirds.items():
        c = thirds & a
        if len(c) >= 3:
            out.append(WitnessedClique(c, pair))
    return canonical(out)


def multiplicity(c: Iterable[str], n: RStructure) -> int:
    c = frozenset(c)
    if len(c) < 3:
        return 0
    return sum(1 for thirds in _symmetric(n).thirds.values() if c <= thirds)


def witness_pairs(c: Iterable[str], n: RStructure) -> list[frozenset]:
    c = frozenset(c)
    return sorted((p for p, t in _symmetric(n).thirds.items() if c <= t), key=key)


def extract_s_structure(a: Iterable[str], n: RStructure, bound: int = DEFAULT_BOUND) -> SStructure:
    a = frozenset(a)
    counts = Counter(c.universe for c in extract_cliques(a, n))
    try:
        return SStructure(a, dict(counts))
    except ValidityError as exc:
        witness = None
        try:
            cert = age_certificate(n, bound)
            witness = cert.witness
        except SearchTooLarge:
            pass
        detail = f"; ambient subset {key(witness)} has negative predimension" if witness else ""
        raise ValidityError(str(exc) + detail, exc.clique, exc.multiplicity, witness) from None


def s_related(a: str, b: str, c: str, n: RStructure) -> bool:
    if len({a, b, c}) < 3:
        return False
    s = {a, b, c}
    return any(s <= t for t in _symmetric(n).thirds.values())


@dataclass(frozen=True)
class SharingEdge:
    u: frozenset
    v: frozenset
    relation: tuple[str, str, str]
    kind: str  # "simple" or "strong"


@dataclass(frozen=True)
class SharingGraph:
    vertices: tuple[frozenset, ...]
    edges: tuple[SharingEdge, ...]
    triangles: tuple[tuple[tuple[frozenset, frozenset, frozenset], tuple[str, str, str]], ...]

    def neighbours(self, v: frozenset) -> list[frozenset]:
        return [e.v if e.u == v else e.u for e in self.edges if v in (e.u, e.v)]

    def components(self) -> list[list[frozenset]]:
        seen: set = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                w = stack.pop()
                comp.append(w)
                for z in self.neighbours(w):
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
            out.append(sorted(comp, key=key))
        return out


def _check_family(a: RStructure, k: Sequence[WitnessedClique]):
    _symmetric(a)
    present = None
    for c in k:
        if not c.witnesses <= a.points:
            raise PreconditionError(f"witnesses of {c} are not in the structure")
        if present is None:
            present = set(extract_cliques(a.points, a))
        if c not in present:
            raise PreconditionError(f"{c} is not a maximal clique of the structure")


def sharing_graph(a: RStructure, k: Sequence[WitnessedClique]) -> SharingGraph:
    _check_family(a, k)
    k = canonical(k)
    users: dict[tuple, list[WitnessedClique]] = {}
    for c in k:
        for r in c.generators:
            if r in a.relations:
                users.setdefault(r, []).append(c)
    edges, triangles = [], []
    for r in sorted(users):
        cs = users[r]
        if len(cs) < 2:
            continue
        kind = "strong" if len(cs) == 3 else "simple"
        for c1, c2 in combinations(cs, 2):
            edges.append(SharingEdge(c1.witnesses, c2.witnesses, r, kind))
        if len(cs) == 3:
            triangles.append((tuple(c.witnesses for c in cs), r))
    return SharingGraph(tuple(c.witnesses for c in k), tuple(edges), tuple(triangles))


def shared_generators(c: WitnessedClique, k: Sequence[WitnessedClique]) -> frozenset:
    """beta: generators of c that also generate another clique of k."""
    others = set()
    for d in k:
        if d != c:
            others |= d.generators
    return c.generators & others


def find_good_clique(a: RStructure, k: Sequence[WitnessedClique]) -> WitnessedClique:
    _check_family(a, k)
    k = canonical(k)
    for c in k:
        if len(shared_generators(c, k)) <= 2:
            return c
    # every clique shares at least three generators: the witnesses of a
    # connected component carry more relations than points
    graph = sharing_graph(a, k)
    comp = graph.components()[0]
    witness = frozenset().union(*comp)
    value = len(witness) - len(a.relations_within(witness))
    raise NoGoodClique(witness, value)


# S-cliques of size five or more

@lru_cache(maxsize=256)
def s_triples(n: RStructure) -> frozenset[frozenset]:
    out = set()
    for t in _symmetric(n).thirds.values():
        if len(t) >= 3:
            out.update(frozenset(c) for c in combinations(sorted(t), 3))
    return frozenset(out)


def s_cliques(n: RStructure, min_size: int = 5) -> list[frozenset]:
    """Every set of at least ``min_size`` points whose triples are all S-related."""
    triples = s_triples(n)
    pts = sorted({p for t in triples for p in t})
    out = []

    def grow(cur: list[str], start: int):
        if len(cur) >= min_size:
            out.append(frozenset(cur))
        for i in range(start, len(pts)):
            p = pts[i]
            if all(frozenset((p, q, r)) in triples for q, r in combinations(cur, 2)):
                cur.append(p)
                grow(cur, i + 1)
                cur.pop()

    grow([], 0)
    return out


def psi(values: Sequence[str], n: RStructure) -> bool:
    """All entries distinct and every triple of them S-related."""
    if len(set(values)) != len(values):
        return False
    s = set(values)
    if len(s) < 3:
        return True
    triples = s_triples(n)
    return all(frozenset(t) in triples for t in combinations(values, 3))


def phi(k: int, m: int, values: Sequence[str], n: RStructure) -> bool:
    """There are m pairwise disjoint pairs extending the tuple to a psi_{k+2}-tuple,
    no two of which jointly extend it to a psi_{k+4}-tuple."""
    if len(values) != k or not psi(values, n):
        return False
    rest = sorted(n.points - set(values))
    cands = [p for p in combinations(rest, 2) if psi(tuple(values) + p, n)]

    def compatible(p, q):
        return not set(p) & set(q) and not psi(tuple(values) + p + q, n)

    def search(chosen: list, start: int) -> bool:
        if len(chosen) == m:
            return True
        for i in range(start, len(cands)):
            if all(compatible(cands[i], q) for q in chosen):
                chosen.append(cands[i])
                if search(chosen, i + 1):
                    return True
                chosen.pop()
        return False

    return search([], 0)
